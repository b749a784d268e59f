"""
Social learning engine

Synchronous rounds in log domain:
1. adapt:   log psi_k = log mu_k + log L_k(xi_k | .) - logsumexp(...)
2. combine: log mu_k  = sum_l a_{lk} log psi_l - logsumexp(...)
Every combine reads the psi snapshot of the same round.
"""
import logging
from collections.abc import Sequence

import numpy as np
from scipy.special import betaln, logsumexp

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import AllZeroLikelihood, DimensionMismatch, InvalidSpec
from weakgraph.core.seeding import agent_streams, split_seed
from weakgraph.services.graph.schemas import CombinationMatrix
from weakgraph.services.learning.schemas import BeliefState, RecordSpec, TrajectoryRecord
from weakgraph.services.models.schemas import LOG_SQRT_2PI, AgentModel

logger = logging.getLogger(__name__)

OBSERVATION_CHUNK = 1024


class LikelihoodBank:
    """Vectorized log L_k(xi_k | theta) over all agents"""

    def __init__(self, models: Sequence[AgentModel]):
        self.N = len(models)
        self.H = models[0].H
        if any(model.H != self.H for model in models):
            raise DimensionMismatch("every agent model must carry the same number of hypotheses")

        gaussian, beta = [], []
        for k, model in enumerate(models):
            kinds = {lik.kind for lik in model.likelihoods}
            if kinds == {"gaussian"}:
                gaussian.append(k)
            elif kinds == {"beta"}:
                beta.append(k)
            else:
                raise InvalidSpec(f"agent {k + 1} mixes likelihood families {sorted(kinds)}")

        self._g_idx = np.asarray(gaussian, dtype=int)
        self._g_means = np.array(
            [[lik.mean for lik in models[k].likelihoods] for k in gaussian]
        ).reshape(len(gaussian), self.H)

        self._b_idx = np.asarray(beta, dtype=int)
        self._b_alpha = np.array(
            [[lik.alpha for lik in models[k].likelihoods] for k in beta]
        ).reshape(len(beta), self.H)
        self._b_beta = np.array(
            [[lik.beta for lik in models[k].likelihoods] for k in beta]
        ).reshape(len(beta), self.H)
        self._b_norm = betaln(self._b_alpha, self._b_beta)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        out = np.empty((self.N, self.H))
        if self._g_idx.size:
            x = xi[self._g_idx, None]
            out[self._g_idx] = -LOG_SQRT_2PI - 0.5 * (x - self._g_means) ** 2
        if self._b_idx.size:
            x = xi[self._b_idx, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                logs = (self._b_alpha - 1.0) * np.log(x) + (self._b_beta - 1.0) * np.log1p(-x)
            inside = (x > 0.0) & (x < 1.0)
            out[self._b_idx] = np.where(inside, logs - self._b_norm, -np.inf)
        return out


class ObservationSource:
    """One private stream per agent, derived from the master seed by agent index"""

    def __init__(self, models: Sequence[AgentModel], seed: int, chunk: int = OBSERVATION_CHUNK):
        self._models = list(models)
        self._streams = agent_streams(seed, len(self._models))
        self._chunk = chunk
        self._buffer = np.empty((len(self._models), chunk))
        self._cursor = chunk

    def _refill(self) -> None:
        for k, (model, stream) in enumerate(zip(self._models, self._streams)):
            self._buffer[k] = model.sample(stream, size=self._chunk)
        self._cursor = 0

    def draw(self) -> np.ndarray:
        if self._cursor == self._chunk:
            self._refill()
        xi = self._buffer[:, self._cursor].copy()
        self._cursor += 1
        return xi


def _normalize(log_values: np.ndarray) -> np.ndarray:
    return log_values - logsumexp(log_values, axis=-1, keepdims=True)


def _apply_floor(log_values: np.ndarray, floor: float) -> tuple[np.ndarray, int]:
    below = log_values < floor
    hits = int(below.sum())
    if hits:
        log_values = np.where(below, floor, log_values)
    return log_values, hits


def init_beliefs(N: int, H: int, mode: str = "uniform", rng: np.random.Generator | None = None) -> BeliefState:
    """
    Initial beliefs with positive mass everywhere

    Args:
        N: Number of agents
        H: Number of hypotheses (>= 2)
        mode: uniform | random (Dirichlet(1, ..., 1) rows)
        rng: Generator for the random mode

    Returns:
        Normalized BeliefState at iteration 0
    """
    if H < 2:
        raise InvalidSpec("at least two hypotheses are required")
    if mode == "uniform":
        return BeliefState(log_mu=np.full((N, H), -np.log(H)))
    if mode == "random":
        rng = rng or np.random.default_rng()
        return BeliefState.from_probabilities(rng.dirichlet(np.ones(H), size=N))
    raise InvalidSpec(f"unknown init mode {mode!r}")


def bayes_update(log_mu: np.ndarray, log_lik: np.ndarray) -> np.ndarray:
    """Row-wise normalized log mu + log L"""
    dead = np.all(np.isneginf(log_lik), axis=-1)
    if np.any(dead):
        raise AllZeroLikelihood("every hypothesis gives zero likelihood to the observation")
    return _normalize(log_mu + log_lik)


def adapt(log_mu_row: np.ndarray, xi: float, model: AgentModel) -> np.ndarray:
    """Local Bayesian update of one agent with its fresh observation"""
    return bayes_update(np.asarray(log_mu_row, dtype=float), model.log_likelihoods(xi))


def combine(log_psi: np.ndarray, A: CombinationMatrix | np.ndarray, agent: int) -> np.ndarray:
    """Geometric pooling of neighbors' intermediate beliefs for a 1-based agent"""
    entries = A.entries if isinstance(A, CombinationMatrix) else np.asarray(A)
    weights = entries[:, agent - 1]
    neighbors = weights > 0
    return _normalize(weights[neighbors] @ log_psi[neighbors])


def combine_all(log_psi: np.ndarray, A: np.ndarray) -> np.ndarray:
    return _normalize(A.T @ log_psi)


def step(state: BeliefState, graph: CombinationMatrix, models: Sequence[AgentModel] | LikelihoodBank,
         source: ObservationSource, floor: float | None = None) -> BeliefState:
    """One synchronous round: every agent adapts, then every agent combines"""
    floor = get_settings().log_floor if floor is None else floor
    bank = models if isinstance(models, LikelihoodBank) else LikelihoodBank(models)
    if bank.N != state.N or graph.N != state.N:
        raise DimensionMismatch(f"state has {state.N} agents, graph {graph.N}, models {bank.N}")

    log_psi = bayes_update(state.log_mu, bank(source.draw()))
    log_psi, psi_hits = _apply_floor(log_psi, floor)
    log_mu = combine_all(log_psi, graph.entries)
    log_mu, mu_hits = _apply_floor(log_mu, floor)

    hits = psi_hits + mu_hits
    if hits and not state.floor_hits:
        logger.warning("[learning] log-beliefs clamped at %.3g from iteration %d", floor, state.iteration + 1)
    return BeliefState(
        log_mu=log_mu,
        iteration=state.iteration + 1,
        log_psi=log_psi,
        floor_hits=state.floor_hits + hits,
    )


def run(graph: CombinationMatrix, models: Sequence[AgentModel], T: int, seed: int,
        record_spec: RecordSpec | None = None, init: str = "uniform") -> TrajectoryRecord:
    """
    T synchronous rounds with recorded snapshots

    Args:
        graph: Combination matrix
        models: One model per agent, in agent order
        T: Number of rounds (>= 1)
        seed: Master seed (observations and random initial beliefs)
        record_spec: Snapshot selection; every iteration of every agent when None
        init: uniform | random

    Returns:
        TrajectoryRecord, bit-identical for identical inputs
    """
    if T < 1:
        raise InvalidSpec("T must be >= 1")
    record_spec = record_spec or RecordSpec()
    agents = record_spec.agents or list(range(1, graph.N + 1))
    if any(not 1 <= a <= graph.N for a in agents):
        raise InvalidSpec(f"recorded agents must lie in 1..{graph.N}")
    rows = np.asarray(agents) - 1
    extra = set(record_spec.iterations)

    observation_seed, init_seed = split_seed(seed, 2)
    bank = LikelihoodBank(models)
    source = ObservationSource(models, observation_seed)
    state = init_beliefs(graph.N, bank.H, init, np.random.default_rng(init_seed))

    iterations, psi_snaps, mu_snaps = [], [], []
    for _ in range(T):
        state = step(state, graph, bank, source)
        i = state.iteration
        if i % record_spec.stride == 0 or i in extra:
            iterations.append(i)
            if "psi" in record_spec.fields:
                psi_snaps.append(state.log_psi[rows].copy())
            if "mu" in record_spec.fields:
                mu_snaps.append(state.log_mu[rows].copy())

    logger.info("[learning] ran %d rounds on %d agents, %d snapshots", T, graph.N, len(iterations))
    return TrajectoryRecord(
        iterations=np.asarray(iterations, dtype=int),
        agents=list(agents),
        H=bank.H,
        seed=seed,
        log_psi=np.asarray(psi_snaps) if psi_snaps else None,
        log_mu=np.asarray(mu_snaps) if mu_snaps else None,
        floor_hits=state.floor_hits,
    )
