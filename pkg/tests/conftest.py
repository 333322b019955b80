"""Shared fixtures and small helpers for the test suite."""

import numpy as np
import pytest

import lambdagates as lg


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def random_state(rng, dim=4):
    """Haar-ish random normalized state vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_hermitian(rng, dim=4, scale=1.0):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (A + A.conj().T)


def trace_distance(rho, sigma):
    w = np.linalg.eigvalsh(rho - sigma)
    return 0.5 * float(np.sum(np.abs(w)))


def state_overlap_deficit(a, b):
    """1 - |<a|b>| for normalized states; insensitive to global phase."""
    return 1.0 - abs(np.vdot(a, b))


def dependent_params(eta=np.pi / 4.0, ratio=0.5, sigma=0.02, **kw):
    return lg.SystemParams.dependent(eta, eps=sigma / ratio, sigma=sigma, **kw)


def independent_params(lambda0, lambda1, ratio=0.5, sigma=0.02, **kw):
    return lg.SystemParams.independent(
        lambda0, lambda1, eps=sigma / ratio, sigma=sigma, **kw
    )
