import numpy as np
import pytest


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d):
    u = random_unitary(rng, d)
    p = rng.dirichlet(np.ones(d))
    return (u * p) @ u.conj().T


def random_hermitian(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + z.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
