"""Shared fixtures: a hand-built weak graph with known limits, canonical models, isolated settings"""
import numpy as np
import pytest

from weakgraph.core.config import get_settings
from weakgraph.services.graph import CombinationMatrix, GraphSpec, NetworkPartition
from weakgraph.services.models import canonical_family

# Two sending pairs (agents 1-2, 3-4) feeding receiving agents 5 and 6.
SMALL_ENTRIES = np.array(
    [
        [0.5, 0.5, 0.0, 0.0, 0.25, 0.0],
        [0.5, 0.5, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.5, 0.5, 0.25, 0.0],
        [0.0, 0.0, 0.5, 0.5, 0.0, 0.5],
        [0.0, 0.0, 0.0, 0.0, 0.25, 0.25],
        [0.0, 0.0, 0.0, 0.0, 0.25, 0.25],
    ]
)
# x[s, j] for receiving agents 5 and 6, worked out by hand from W = A_SR (I - A_R)^{-1}
SMALL_X = np.array([[0.375, 0.125], [0.625, 0.875]])


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def small_partition() -> NetworkPartition:
    return NetworkPartition(S=2, R=1, sizes=[2, 2, 2])


@pytest.fixture
def small_graph(small_partition) -> CombinationMatrix:
    return CombinationMatrix(entries=SMALL_ENTRIES.copy(), partition=small_partition)


@pytest.fixture
def setup1_spec() -> GraphSpec:
    return GraphSpec(
        partition=NetworkPartition(S=2, R=1, sizes=[9, 3, 4]),
        er_prob=0.7,
        send_recv_probs=[0.5, 0.5],
        seed=3,
    )


@pytest.fixture
def canonical_models():
    """(sending models [N1, N2], receiving model) with delta = 1"""
    return canonical_family(1.0)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    out = tmp_path / "artifacts"
    monkeypatch.setenv("WEAKGRAPH_OUTPUT_DIR", str(out))
    get_settings.cache_clear()
    return out


@pytest.fixture
def small_x() -> np.ndarray:
    return SMALL_X.copy()
