"""Pure-numpy propagation kernels.

Fallback implementations of the two hot loops, used when the compiled
extension is unavailable or disabled. Same contracts as ``_core``:

* ``propagate_unitary_stack``: exponential-midpoint product over a
  precomputed stack of midpoint Hamiltonians.
* ``lindblad_rk4``: classical fourth-order stepping of the master
  equation over a stack sampled at step endpoints and half points.

Both consume plain C-contiguous complex128 arrays; no callbacks enter
the loops.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _unitary_steps(h_mid, dt):
    # Batched eigendecomposition: one LAPACK call for the whole stack.
    w, v = np.linalg.eigh(h_mid)
    phase = np.exp(-1j * w * dt)
    return np.einsum("nij,nj,nkj->nik", v, phase, v.conj(), optimize=True)


def propagate_unitary_stack(h_mid, dt, psi0=None, stride=0):
    """Accumulate U = prod_k exp(-i H_k dt) over the midpoint stack.

    Parameters
    ----------
    h_mid : (n, d, d) complex ndarray
        Hamiltonians at the step midpoints, in step order.
    dt : float
        Step size.
    psi0 : (d,) complex ndarray, optional
        Initial state to track for history sampling.
    stride : int
        If positive (and psi0 given), record the state before every
        ``stride``-th step and after the final step.

    Returns
    -------
    (U, sample_steps, states)
        Total propagator, recorded step indices (None if no sampling),
        and recorded states (None if no sampling).
    """
    h_mid = np.ascontiguousarray(h_mid, dtype=np.complex128)
    n, d = h_mid.shape[0], h_mid.shape[1]
    steps = _unitary_steps(h_mid, dt)

    record = stride > 0 and psi0 is not None
    U = np.eye(d, dtype=np.complex128)
    idx = [] if record else None
    states = [] if record else None
    for k in range(n):
        if record and k % stride == 0:
            idx.append(k)
            states.append(U @ psi0)
        U = steps[k] @ U
    if record:
        idx.append(n)
        states.append(U @ psi0)
        return U, np.asarray(idx, dtype=np.intp), np.asarray(states)
    return U, None, None


def lindblad_rk4(h_half, lops, rho0, dt, stride=0):
    """RK4 integration of drho/dt = -i[H, rho] + dissipator(rho).

    Parameters
    ----------
    h_half : (2n+1, d, d) complex ndarray
        Hamiltonian sampled at t_0, t_0 + dt/2, t_0 + dt, ... so each
        step k uses entries 2k, 2k+1, 2k+2.
    lops : (m, d, d) complex ndarray
        Collapse operators.
    rho0 : (d, d) complex ndarray
    dt : float
    stride : int
        If positive, record diag(rho) before every ``stride``-th step
        and after the final one.

    Returns
    -------
    (rho, sample_steps, populations)
    """
    h_half = np.ascontiguousarray(h_half, dtype=np.complex128)
    lops = np.ascontiguousarray(lops, dtype=np.complex128)
    rho = np.array(rho0, dtype=np.complex128, copy=True)
    n = (h_half.shape[0] - 1) // 2
    ldag = lops.conj().swapaxes(-1, -2)
    # Sum of L^dag L is constant; precompute its half for the anticommutator.
    half_ldl = 0.5 * np.einsum("mij,mjk->ik", ldag, lops)

    def rhs(H, r):
        out = -1j * (H @ r - r @ H)
        out += np.einsum("mij,jk,mlk->il", lops, r, lops.conj(), optimize=True)
        out -= half_ldl @ r + r @ half_ldl
        return out

    record = stride > 0
    idx = [] if record else None
    pops = [] if record else None
    for k in range(n):
        if record and k % stride == 0:
            idx.append(k)
            pops.append(np.diagonal(rho).real.copy())
        h0 = h_half[2 * k]
        hm = h_half[2 * k + 1]
        h1 = h_half[2 * k + 2]
        k1 = rhs(h0, rho)
        k2 = rhs(hm, rho + 0.5 * dt * k1)
        k3 = rhs(hm, rho + 0.5 * dt * k2)
        k4 = rhs(h1, rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if record:
        idx.append(n)
        pops.append(np.diagonal(rho).real.copy())
        return rho, np.asarray(idx, dtype=np.intp), np.asarray(pops)
    return rho, None, None
