import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_feasible_point(rng, eps_lo=0.0, eps_hi=1.0):
    from bb84eve import FamilyPoint

    eps = rng.uniform(eps_lo, eps_hi)
    c22 = rng.uniform(-1.0, 2 * eps - 1.0)
    return FamilyPoint(float(eps), float(c22))
