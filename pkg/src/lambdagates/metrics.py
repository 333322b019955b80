"""Gate-quality metrics: average fidelity, leakage, unitarity, improvement.

The six cardinal input states live in the dressed {dark, bright} qubit
subspace (indices 0 and 1 of the four-level basis), because that is
where the ideal gate is diagonal. Channel outputs are projected onto
that subspace *without renormalization*, so leakage directly depresses
the fidelity instead of being silently divided out.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .model import TARGET, UNWANTED
from .numerics import frobenius_deviation_from_identity

__all__ = [
    "IMPROVEMENT_FLOOR",
    "ideal_gate",
    "ideal_phase_for_rotation",
    "cardinal_states",
    "unitary_channel",
    "average_gate_fidelity",
    "leakage_of",
    "projected_unitarity_deviation",
    "gate_improvement",
    "Improvement",
    "GateReport",
]

IMPROVEMENT_FLOOR = 1e-12

Improvement = namedtuple("Improvement", ["ratio", "clipped"])


def ideal_gate(phi):
    """diag(e^{-i phi}, e^{i phi}) on the {dark, bright} subspace."""
    return np.diag([np.exp(-1j * phi), np.exp(1j * phi)]).astype(np.complex128)


def ideal_phase_for_rotation(chi):
    """Phase argument of :func:`ideal_gate` that realizes a rotation by chi.

    A rotation by angle chi about the dressing axis multiplies the dark
    and bright states by e^{+i chi/2} and e^{-i chi/2} respectively
    (they are the -1 and +1 eigenstates of the axis operator), i.e. it
    equals ``ideal_gate(-chi/2)``. Keeping this mapping in one place is
    what ties the rotation-angle bookkeeping of the pulse designs to the
    fidelity metric.
    """
    return -0.5 * chi


def cardinal_states():
    """Six axis states of the dressed qubit, embedded in the 4-level space.

    Order: +z, -z, +x, -x, +y, -y with |dark> as the +z pole.
    """
    d = np.array([1.0, 0.0], dtype=np.complex128)
    b = np.array([0.0, 1.0], dtype=np.complex128)
    inv = 1.0 / math.sqrt(2.0)
    kets = [
        d,
        b,
        inv * (d + b),
        inv * (d - b),
        inv * (d + 1j * b),
        inv * (d - 1j * b),
    ]
    out = []
    for k in kets:
        rho = np.zeros((4, 4), dtype=np.complex128)
        rho[:2, :2] = np.outer(k, k.conj())
        out.append(rho)
    return out


def unitary_channel(U):
    """Wrap a 4x4 unitary as a density-matrix channel."""
    U = np.asarray(U, dtype=np.complex128)
    Ud = U.conj().T
    return lambda rho: U @ rho @ Ud


def average_gate_fidelity(channel, phi_target):
    """Average fidelity of ``channel`` against ``ideal_gate(phi_target)``.

    F = (1/6) sum_j Tr[ U_ideal rho_j U_ideal^dag  P channel(rho_j) P^dag ]

    with the sum over the six cardinal states and P the (unnormalized)
    projector onto the dressed qubit subspace.
    """
    U_id = ideal_gate(phi_target)
    total = 0.0
    for rho in cardinal_states():
        ideal_out = U_id @ rho[:2, :2] @ U_id.conj().T
        actual_out = np.asarray(channel(rho))[:2, :2]
        total += float(np.trace(ideal_out @ actual_out).real)
    return total / 6.0


def leakage_of(channel):
    """Worst-case population left outside the qubit subspace.

    Max over the six cardinal inputs of Tr[(P_t + P_u) channel(rho_j)].
    """
    worst = 0.0
    for rho in cardinal_states():
        out = np.asarray(channel(rho))
        leaked = float(out[TARGET, TARGET].real + out[UNWANTED, UNWANTED].real)
        worst = max(worst, leaked)
    return worst


def projected_unitarity_deviation(U):
    """||W W^dag - 1||_F of the qubit block W of a 4x4 propagator.

    The full propagator is unitary whenever the flow is; what this
    detects is population leaving the qubit subspace during the gate.
    """
    W = np.asarray(U, dtype=np.complex128)[:2, :2]
    return frobenius_deviation_from_identity(W @ W.conj().T)


def gate_improvement(err_baseline, err_corrected):
    """Ratio of baseline to corrected gate error.

    Nonpositive corrected errors (possible at floating-point resolution
    when a gate is exact) are clipped to ``IMPROVEMENT_FLOOR`` and
    flagged rather than rejected, so sweep tables never lose rows.
    """
    clipped = False
    if err_corrected <= 0.0:
        err_corrected = IMPROVEMENT_FLOOR
        clipped = True
    return Improvement(ratio=float(err_baseline) / float(err_corrected), clipped=clipped)


@dataclass(frozen=True)
class GateReport:
    """One gate's quality summary."""

    fidelity: float
    gate_error: float
    unitarity_deviation: float
    leakage: float
    phi_target: float
    strategy: str

    def __post_init__(self):
        for name in ("fidelity", "gate_error", "unitarity_deviation", "leakage"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.fidelity > 1.0 + 1e-9:
            raise ValueError(
                f"fidelity {self.fidelity!r} exceeds 1 beyond numerical tolerance"
            )

    def as_dict(self):
        return asdict(self)
