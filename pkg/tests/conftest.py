import numpy as np
import pytest

from mixq.core import DensityMatrix
from mixq.dqc1 import random_unitary
from mixq.states import BELL_VECTORS


@pytest.fixture
def bell():
    return DensityMatrix.from_pure(BELL_VECTORS[0])


def assert_valid_density(rho: DensityMatrix):
    m = rho.data
    assert np.max(np.abs(m - m.conj().T)) <= 1e-10
    assert abs(np.trace(m) - 1) <= 1e-10
    assert np.linalg.eigvalsh(m)[0] >= -1e-10


def classical_state(seed: int, rotate: bool = True) -> DensityMatrix:
    """Two-qubit state diagonal in a (random) product basis."""
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(4))
    u = np.eye(4)
    if rotate:
        u = np.kron(random_unitary(2, 1000 + seed).data, random_unitary(2, 2000 + seed).data)
    return DensityMatrix(u @ np.diag(p) @ u.conj().T)
