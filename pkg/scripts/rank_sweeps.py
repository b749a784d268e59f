#!/usr/bin/env python3
"""
Script untuk rank sweeps over random divergence matrices
Usage: python scripts/rank_sweeps.py --draws 50 --uniform-draws 500 --seed 7 [--rel-tol 1e-10]

- structured Gaussian: rank C(theta) must be 2 for 2 <= S <= 6, S <= H <= 8
- uniform random D: rank C(theta) must be S and theta* unique
"""
import argparse
import sys
from pathlib import Path

import numpy as np

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from weakgraph.core.exceptions import AmbiguousMinimizer  # noqa: E402
from weakgraph.services.analysis import limiting_hypothesis  # noqa: E402
from weakgraph.services.models import structured_gaussian_D  # noqa: E402
from weakgraph.services.topology import rank_profile  # noqa: E402

UNIFORM_SHAPES = [(2, 2), (3, 3), (4, 4), (3, 5), (4, 6)]


def structured_sweep(draws: int, rng: np.random.Generator, rel_tol: float) -> int:
    """Count (S, H, draw, theta) cases where rank C(theta) != 2"""
    violations = 0
    for S in range(2, 7):
        for H in range(S, 9):
            for _ in range(draws):
                means = np.sort(rng.uniform(-5.0, 5.0, size=H))
                assignment = rng.choice(means, size=S, replace=False)
                ranks = rank_profile(structured_gaussian_D(means, assignment), rel_tol)
                violations += sum(rank != 2 for rank in ranks)
        print(f"   S={S}: done")
    return violations


def uniform_sweep(draws: int, rng: np.random.Generator, rel_tol: float) -> int:
    """Count draws with a rank-deficient C(theta) or a tied theta*"""
    violations = 0
    for S, H in UNIFORM_SHAPES:
        failed = 0
        for _ in range(draws):
            D = rng.uniform(size=(H, S))
            x = rng.dirichlet(np.ones(S))
            try:
                limiting_hypothesis(D @ x)
            except AmbiguousMinimizer:
                failed += 1
                continue
            if any(rank != S for rank in rank_profile(D, rel_tol)):
                failed += 1
        print(f"   (S={S}, H={H}): {failed} violation(s)")
        violations += failed
    return violations


def main():
    parser = argparse.ArgumentParser(description="Rank sweeps for topology-learning feasibility")
    parser.add_argument("--draws", type=int, default=50, help="Structured-Gaussian draws per (S, H)")
    parser.add_argument("--uniform-draws", type=int, default=500, help="Uniform-D draws per shape")
    parser.add_argument("--seed", type=int, default=7, help="Sweep seed")
    parser.add_argument("--rel-tol", type=float, default=1e-10, help="Relative singular-value threshold")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print("🔍 Structured Gaussian sweep (expect rank 2)...")
    structured = structured_sweep(args.draws, rng, args.rel_tol)
    print("🔍 Uniform random D sweep (expect rank S)...")
    uniform = uniform_sweep(args.uniform_draws, rng, args.rel_tol)

    if structured or uniform:
        print(f"❌ Violations: structured={structured}, uniform={uniform}")
        sys.exit(1)
    print("✅ No violations")


if __name__ == "__main__":
    main()
