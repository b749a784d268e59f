"""Seed derivation for reproducible runs"""
import numpy as np


def split_seed(seed: int, n: int) -> list[int]:
    """Derive n independent integer seeds from a master seed"""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]


def agent_streams(seed: int, n_agents: int) -> list[np.random.Generator]:
    """One generator per agent, indexed like the agents"""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n_agents)]
