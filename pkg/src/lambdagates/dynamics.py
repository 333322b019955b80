"""Time propagation of the four-level dynamics.

Two integrators, chosen so numerical artifacts stay out of the physics
diagnostics:

* unitary flow uses an exponential-midpoint product (each step is an
  exact matrix exponential, so the propagator is unitary per step and
  any deviation from unitarity measured downstream is physical);
* the master equation uses fixed-step classical RK4 on the density
  matrix with no trace renormalization (trace drift is a quality gate,
  not something to hide).

Hamiltonians enter as callables of time; they are evaluated once into a
stack (vectorized when the callable supports arrays) and the stack is
handed to the active kernel backend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import backend

__all__ = [
    "TimeGrid",
    "PropagationResult",
    "PropagationError",
    "ConvergenceWarning",
    "DEFAULT_STEPS",
    "DEFAULT_HISTORY_STRIDE",
    "propagate_unitary",
    "propagate_lindblad",
    "population_history",
]

DEFAULT_STEPS = 4096
DEFAULT_HISTORY_STRIDE = 8


class PropagationError(RuntimeError):
    """Raised when an integration produces an unphysical result."""


class ConvergenceWarning(UserWarning):
    """Step-halving discrepancy above tolerance.

    Carries both propagators so the caller can inspect the difference:
    attributes ``coarse`` and ``fine``.
    """

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid over [t_start, t_end]."""

    t_end: float
    steps: int = DEFAULT_STEPS
    t_start: float = 0.0

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError(
                f"t_end must exceed t_start, got [{self.t_start}, {self.t_end}]"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")

    @property
    def dt(self):
        return (self.t_end - self.t_start) / self.steps

    def midpoints(self):
        return self.t_start + (np.arange(self.steps) + 0.5) * self.dt

    def half_points(self):
        """Step endpoints and half points: 2*steps + 1 samples."""
        return self.t_start + np.arange(2 * self.steps + 1) * (0.5 * self.dt)

    def edges(self):
        return self.t_start + np.arange(self.steps + 1) * self.dt

    def halved(self):
        return TimeGrid(t_end=self.t_end, steps=2 * self.steps, t_start=self.t_start)


@dataclass
class PropagationResult:
    """Final propagator or state, plus an optional sampled history."""

    final_operator: Optional[np.ndarray] = None
    final_rho: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = None
    populations: Optional[np.ndarray] = None


def _evaluate_stack(h: Callable, ts: np.ndarray):
    """Evaluate a Hamiltonian callable on all sample times at once.

    Accepts either a vectorized callable (array in, (n, d, d) out) or a
    scalar one, and checks Hermiticity of the whole stack so the eigh
    kernels never see a silently non-Hermitian input.
    """
    stack = None
    try:
        cand = np.asarray(h(ts))
        if cand.ndim == 3 and cand.shape[0] == ts.shape[0] and cand.shape[1] == cand.shape[2]:
            stack = cand
    except Exception:
        stack = None
    if stack is None:
        stack = np.asarray([h(float(t)) for t in ts])
        if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
            raise ValueError(
                f"Hamiltonian callable returned shape {stack.shape[1:]}, "
                f"expected square matrices"
            )
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    dev = float(np.max(np.abs(stack - stack.conj().swapaxes(-1, -2))))
    if dev > 1e-12:
        raise ValueError(
            f"Hamiltonian is not Hermitian on the grid: max|H - H^dag| = {dev:.3e}"
        )
    return stack


def propagate_unitary(h, grid, *, psi0=None, history_stride=0,
                      check_convergence=False, convergence_tol=1e-8):
    """Integrate the Schroedinger flow of a time-dependent Hamiltonian.

    Parameters
    ----------
    h : callable
        Time -> Hamiltonian (4x4 or any square size); vectorized
        callables are evaluated in one shot.
    grid : TimeGrid
    psi0 : ndarray, optional
        State to track when sampling a population history.
    history_stride : int
        Record the state every this many steps (0 disables). Requires
        ``psi0``.
    check_convergence : bool
        Re-run at double resolution and warn (:class:`ConvergenceWarning`,
        carrying both propagators) if the two results differ by more
        than ``convergence_tol`` in Frobenius norm.

    Returns
    -------
    PropagationResult
        ``final_operator`` always; ``times``/``populations`` when a
        history was requested.
    """
    if history_stride > 0 and psi0 is None:
        raise ValueError("history sampling requires psi0")
    stack = _evaluate_stack(h, grid.midpoints())
    psi = None if psi0 is None else np.asarray(psi0, dtype=np.complex128)
    U, idx, states = backend.propagate_unitary_stack(
        stack, grid.dt, psi, history_stride
    )

    if check_convergence:
        fine_grid = grid.halved()
        fine_stack = _evaluate_stack(h, fine_grid.midpoints())
        U_fine, _, _ = backend.propagate_unitary_stack(fine_stack, fine_grid.dt, None, 0)
        dev = float(np.linalg.norm(U - U_fine))
        if dev > convergence_tol:
            warnings.warn(
                ConvergenceWarning(
                    f"step-halving discrepancy {dev:.3e} exceeds "
                    f"{convergence_tol:.0e} at steps={grid.steps}",
                    coarse=U,
                    fine=U_fine,
                )
            )

    result = PropagationResult(final_operator=U)
    if idx is not None:
        result.times = grid.t_start + idx * grid.dt
        result.populations = np.abs(states) ** 2
    return result


def propagate_lindblad(h, lindblad_ops, rho0, grid, *, history_stride=0):
    """Integrate the master equation with the given collapse operators.

    The Hamiltonian is sampled at step endpoints and half points (the
    classical RK4 stencil). The density matrix is not renormalized;
    trace drift over the window is the integrator's quality signal. A
    final-state eigenvalue below -1e-6 raises :class:`PropagationError`.

    Returns
    -------
    PropagationResult
        ``final_rho`` always; diagonal populations sampled every
        ``history_stride`` steps when requested.
    """
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ValueError(f"rho0 must be square, got shape {rho0.shape}")
    if float(np.max(np.abs(rho0 - rho0.conj().T))) > 1e-10:
        raise ValueError("rho0 must be Hermitian")
    stack = _evaluate_stack(h, grid.half_points())
    lops = np.ascontiguousarray(np.asarray(lindblad_ops, dtype=np.complex128))
    if lops.ndim == 2:
        lops = lops[None, :, :]
    rho, idx, pops = backend.lindblad_rk4(stack, lops, rho0, grid.dt, history_stride)

    eigmin = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if eigmin < -1e-6:
        raise PropagationError(
            f"density matrix left the physical cone: min eigenvalue "
            f"{eigmin:.3e} (integrator failure; try more steps)"
        )

    result = PropagationResult(final_rho=rho)
    if idx is not None:
        result.times = grid.t_start + idx * grid.dt
        result.populations = pops
    return result


def population_history(result):
    """History table (t, p_0, ..., p_{d-1}) from a propagation result.

    Rows are the sampled times; populations are the squared amplitudes
    (unitary case) or density-matrix diagonal (master-equation case).
    """
    if result.times is None or result.populations is None:
        raise ValueError(
            "no history recorded; pass history_stride (and psi0 for the "
            "unitary integrator) when propagating"
        )
    return np.column_stack([result.times, result.populations])
