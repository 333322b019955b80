"""Small dense complex linear algebra used by every other module.

All matrices here are 2x2 or 4x4, so the routines favor exactness over
asymptotic cleverness: matrix exponentials go through a closed form (2x2)
or a Hermitian eigendecomposition (larger), both of which give a unitary
result by construction rather than by series truncation.

Units follow the rest of the package: energies in meV, times in 1/meV,
with hbar = 1.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HERMITICITY_TOL",
    "hermitian_expm",
    "frobenius_deviation_from_identity",
    "unitarity_deviation",
    "wrap_angle",
]

# Absolute entrywise tolerance for accepting a matrix as Hermitian.
HERMITICITY_TOL = 1e-12


def _as_square_complex(M, name="matrix"):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def hermitian_expm(H, dt):
    """Unitary exp(-i H dt) for a Hermitian matrix H.

    For 2x2 input the exponential is evaluated in closed form from the
    identity-plus-traceless split; anything larger goes through
    ``numpy.linalg.eigh``. Either way the result is unitary to machine
    precision, independent of the size of ``dt``.

    Raises
    ------
    ValueError
        If H deviates from Hermiticity by more than ``HERMITICITY_TOL``
        in any entry, or if ``dt`` is not finite.
    """
    H = _as_square_complex(H, "H")
    if not np.isfinite(dt):
        raise ValueError(f"dt must be finite, got {dt!r}")
    dev = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if dev > HERMITICITY_TOL:
        raise ValueError(
            f"matrix is not Hermitian: max|H - H^dag| = {dev:.3e} "
            f"exceeds tolerance {HERMITICITY_TOL:.0e}"
        )
    # Symmetrize so eigh sees an exactly Hermitian input.
    H = 0.5 * (H + H.conj().T)

    if H.shape[0] == 2:
        m = 0.5 * (H[0, 0].real + H[1, 1].real)
        z = 0.5 * (H[0, 0].real - H[1, 1].real)
        c = H[0, 1]
        r = np.hypot(z, abs(c))
        phase = np.exp(-1j * m * dt)
        traceless = H - m * np.eye(2)
        if r * abs(dt) < 1e-150:
            # sin(r dt)/r limit; keeps the formula exact as the drive vanishes
            factor = dt
        else:
            factor = np.sin(r * dt) / r
        return phase * (np.cos(r * dt) * np.eye(2) - 1j * factor * traceless)

    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * w * dt)) @ v.conj().T


def frobenius_deviation_from_identity(M):
    """Frobenius norm ||M - 1||_F of the deviation from the identity."""
    M = _as_square_complex(M, "M")
    return float(np.linalg.norm(M - np.eye(M.shape[0])))


def unitarity_deviation(U):
    """||U U^dag - 1||_F, zero exactly when U is unitary.

    Applied to a propagator projected onto a subspace this measures how
    much population has left that subspace, which is why it is reported
    as a gate diagnostic and not merely an integrator check.
    """
    U = _as_square_complex(U, "U")
    return frobenius_deviation_from_identity(U @ U.conj().T)


def wrap_angle(x):
    """Map an angle (or array of angles) into [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
