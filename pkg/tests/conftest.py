import numpy as np
import pytest

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def sx_igz(gamma):
    return SX - 1j * gamma * SZ


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def real_spectrum_matrix(rng, n, spread=1.0):
    """``S diag(real) S^-1`` with a well-conditioned random ``S``."""
    s = np.eye(n) + 0.3 * random_complex(rng, n) / np.sqrt(n)
    d = np.sort(rng.uniform(-spread, spread, n)) + np.arange(n) * 0.5
    return s @ np.diag(d) @ np.linalg.inv(s)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
