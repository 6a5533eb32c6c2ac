import numpy as np
import pytest

from qunfold.states import make_rng

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def rng():
    return make_rng(20261016)


def random_hermitian_uniform(n, rng):
    a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    return (a + a.conj().T) / 2
