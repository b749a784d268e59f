"""
Linear-algebra facts behind the feasibility results

- structured Gaussian D is half a Euclidean distance matrix of scalar means,
  so every C(theta) has rank 2
- the anchoring operator I(theta) = 1 e_theta^T - I has a one-dimensional null
  space spanned by 1
"""
from collections.abc import Sequence

import numpy as np

from weakgraph.core.exceptions import CertificateViolation, DegeneratePoints, InvalidSpec
from weakgraph.services.models.schemas import DivergenceMatrix

IDENTITY_TOL = 1e-10


def edm(points: Sequence[float]) -> np.ndarray:
    """Squared distances between scalar points"""
    p = np.asarray(points, dtype=float)
    return (p[:, None] - p[None, :]) ** 2


def anchoring_operator(theta: int, H: int) -> np.ndarray:
    if not 1 <= theta <= H:
        raise InvalidSpec(f"theta must lie in 1..{H}, got {theta}")
    op = -np.eye(H)
    op[:, theta - 1] += 1.0
    return op


def lemma2_projection(theta: int, H: int, tol: float = IDENTITY_TOL) -> np.ndarray:
    """I - I(theta)^+ I(theta), checked against (1/H) 1 1^T"""
    op = anchoring_operator(theta, H)
    projection = np.eye(H) - np.linalg.pinv(op) @ op
    gap = float(np.max(np.abs(projection - np.full((H, H), 1.0 / H))))
    if gap > tol:
        raise CertificateViolation(f"projection differs from (1/H) 1 1^T by {gap:.3e}")
    return projection


def v3_certificate(e12: float, e13: float, e23: float, tol: float = IDENTITY_TOL) -> np.ndarray:
    """
    Solution of v^T E3 = 1^T for the 3-point distance matrix E3

    Entry i is (e_ij + e_ik - e_jk) / (2 e_ij e_ik). For scalar points it also
    satisfies v^T 1 = 0.
    """
    if min(e12, e13, e23) <= 0:
        raise DegeneratePoints("the three points must be distinct")
    v = np.array(
        [
            (e12 + e13 - e23) / (2.0 * e12 * e13),
            (e12 + e23 - e13) / (2.0 * e12 * e23),
            (e13 + e23 - e12) / (2.0 * e13 * e23),
        ]
    )
    E3 = np.array([[0.0, e12, e13], [e12, 0.0, e23], [e13, e23, 0.0]])
    solve_gap = float(np.max(np.abs(v @ E3 - 1.0)))
    scale = float(np.max(np.abs(v)))
    sum_gap = abs(float(v.sum())) / scale
    if solve_gap > tol:
        raise CertificateViolation(f"v^T E3 differs from 1^T by {solve_gap:.3e}")
    if sum_gap > tol:
        raise CertificateViolation(f"v^T 1 = {v.sum():.3e}, points are not collinear")
    return v


def range_contains_ones(D: DivergenceMatrix | np.ndarray) -> float:
    """|| D D^+ 1 - 1 ||, zero when 1 lies in the column space of D"""
    d = D.values if isinstance(D, DivergenceMatrix) else np.asarray(D, dtype=float)
    ones = np.ones(d.shape[0])
    return float(np.linalg.norm(d @ np.linalg.pinv(d) @ ones - ones))
