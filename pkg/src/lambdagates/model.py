"""Hamiltonians, frame maps and dissipators for the four-level system.

Basis ordering is fixed once and shared by every builder and metric:

===========  =======================================
index        meaning
===========  =======================================
0            dark state  |D>   (dressed frame)
1            bright state |B>  (dressed frame)
2            target excited state |t>
3            unwanted excited state |u>
===========  =======================================

In the lab frame the first two indices are the bare qubit states |0>, |1>
instead; the excited indices are the same in both frames. The dressed
(CPT) frame map acts only on the qubit subspace and is time independent,
so operators conjugate covariantly between the two orderings.

All builders accept a scalar time or a 1-D array of times; with an array
they return a stacked ``(n, 4, 4)`` array, which is what the propagators
consume. Energies are in meV, times in 1/meV (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pulses import SQRT2, sech_envelope

__all__ = [
    "DARK",
    "BRIGHT",
    "TARGET",
    "UNWANTED",
    "LAB_Q0",
    "LAB_Q1",
    "SystemParams",
    "dependent_couplings",
    "cpt_transform",
    "h_cpt",
    "h_lab_interaction",
    "h_crosstalk",
    "h_drag_orders",
    "s1_generator",
    "lindblad_generators",
]

# Dressed-frame indices.
DARK, BRIGHT, TARGET, UNWANTED = 0, 1, 2, 3
# Lab-frame qubit indices (excited indices coincide with the dressed frame).
LAB_Q0, LAB_Q1 = 0, 1

_COUPLING_MODES = ("dependent", "independent")


def dependent_couplings(eta):
    """Couplings locked by the basis mixing angle: (-tan(eta), cot(eta)).

    Their product is exactly -1. Angles where either coupling diverges or
    vanishes (eta a multiple of pi/2) are rejected.
    """
    s, c = math.sin(eta), math.cos(eta)
    if abs(s) < 1e-9 or abs(c) < 1e-9:
        raise ValueError(
            f"eta = {eta:.6g} makes a coupling singular; need eta away from "
            f"multiples of pi/2"
        )
    return -s / c, c / s


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the four-level system and its drive.

    ``delta`` is a bare detuning used by builders that take no pulse plan
    (the plan's resolved detuning takes precedence otherwise). In
    ``dependent`` coupling mode the two lambda values are locked to
    ``eta`` and validated at construction; use the :meth:`dependent` and
    :meth:`independent` factories rather than filling fields by hand.
    """

    eps: float
    sigma: float
    t_g: Optional[float] = None
    lambda0: float = 0.0
    lambda1: float = 0.0
    eta: Optional[float] = None
    delta: float = 0.0
    gamma: float = 0.0
    omega_s: float = 0.0
    coupling_mode: str = "independent"
    kappa01: float = 1.0
    kappa10: float = 1.0

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.t_g is None:
            # Default gate window: 16 bandwidth units, envelope centered.
            object.__setattr__(self, "t_g", 16.0 / self.sigma)
        if self.t_g <= 0:
            raise ValueError(f"t_g must be positive, got {self.t_g}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.omega_s < 0:
            raise ValueError(f"omega_s must be nonnegative, got {self.omega_s}")
        if self.coupling_mode not in _COUPLING_MODES:
            raise ValueError(
                f"coupling_mode must be one of {_COUPLING_MODES}, "
                f"got {self.coupling_mode!r}"
            )
        if self.coupling_mode == "dependent":
            if self.eta is None:
                raise ValueError("dependent coupling mode requires eta")
            l0, l1 = dependent_couplings(self.eta)
            if abs(l0 - self.lambda0) > 1e-12 or abs(l1 - self.lambda1) > 1e-12:
                raise ValueError(
                    f"dependent couplings must satisfy lambda0 = -tan(eta), "
                    f"lambda1 = cot(eta); got ({self.lambda0}, {self.lambda1}) "
                    f"for eta = {self.eta}"
                )

    @classmethod
    def dependent(cls, eta, *, eps, sigma, t_g=None, delta=0.0, gamma=0.0,
                  omega_s=0.0, kappa01=1.0, kappa10=1.0):
        l0, l1 = dependent_couplings(eta)
        return cls(eps=eps, sigma=sigma, t_g=t_g, lambda0=l0, lambda1=l1,
                   eta=eta, delta=delta, gamma=gamma, omega_s=omega_s,
                   coupling_mode="dependent", kappa01=kappa01, kappa10=kappa10)

    @classmethod
    def independent(cls, lambda0, lambda1, *, eps, sigma, t_g=None, delta=0.0,
                    gamma=0.0, omega_s=0.0, kappa01=1.0, kappa10=1.0):
        return cls(eps=eps, sigma=sigma, t_g=t_g, lambda0=lambda0,
                   lambda1=lambda1, eta=None, delta=delta, gamma=gamma,
                   omega_s=omega_s, coupling_mode="independent",
                   kappa01=kappa01, kappa10=kappa10)


def cpt_transform(theta, alpha=0.0):
    """Unitary mapping lab-frame amplitudes to dressed-frame amplitudes.

    Rows are the dark and bright bras built from the drive parameters,
    with sin(theta/2) and cos(theta/2) the relative drive weights and
    alpha the relative drive phase:

        |D> = cos(theta/2)|0> - e^{i alpha} sin(theta/2)|1>
        |B> = e^{-i alpha} sin(theta/2)|0> + cos(theta/2)|1>

    Identity on the excited states. For theta = pi/2, alpha = 0 this is
    the equal-weight mixing used for rotations about the x axis.
    """
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    ea = np.exp(1j * alpha)
    V = np.eye(4, dtype=np.complex128)
    V[DARK, LAB_Q0] = c
    V[DARK, LAB_Q1] = -s / ea
    V[BRIGHT, LAB_Q0] = s * ea
    V[BRIGHT, LAB_Q1] = c
    return V


def _drive_amplitudes(plan, t):
    t = np.asarray(t, dtype=float)
    om_o = np.asarray(plan.omega_o(t), dtype=float)
    om_c = np.asarray(plan.omega_c(t), dtype=float)
    om_o, om_c = np.broadcast_arrays(om_o, om_c, np.zeros(t.shape))[:2]
    return t, om_o, om_c


def _alloc(t_shape):
    return np.zeros(t_shape + (4, 4), dtype=np.complex128)


def h_cpt(params, plan, t):
    """Dressed-frame Hamiltonian with the drive resolved by ``plan``.

    Diagonal (delta/2, delta/2, -delta/2, -delta/2 + eps) plus the three
    driven transition blocks: the bright-target element
    (omega_o + i omega_c) / sqrt(2) and the dark-unwanted /
    bright-unwanted elements scaled by (lambda0 -+ lambda1) / (2 sqrt(2)).
    Equal per-leg drive amplitudes are assumed (the equal-weight dressing
    of an x rotation).
    """
    t, om_o, om_c = _drive_amplitudes(plan, t)
    H = _alloc(t.shape)
    delta = plan.delta
    H[..., DARK, DARK] = 0.5 * delta
    H[..., BRIGHT, BRIGHT] = 0.5 * delta
    H[..., TARGET, TARGET] = -0.5 * delta
    H[..., UNWANTED, UNWANTED] = -0.5 * delta + params.eps

    amp = (om_o + 1j * om_c) / SQRT2
    coef_du = (params.lambda0 - params.lambda1) / 2.0
    coef_bu = (params.lambda0 + params.lambda1) / 2.0
    H[..., TARGET, BRIGHT] = amp
    H[..., BRIGHT, TARGET] = amp.conj()
    H[..., UNWANTED, DARK] = coef_du * amp
    H[..., DARK, UNWANTED] = coef_du * amp.conj()
    H[..., UNWANTED, BRIGHT] = coef_bu * amp
    H[..., BRIGHT, UNWANTED] = coef_bu * amp.conj()
    return H


def h_lab_interaction(params, plan, t):
    """Lab-frame interaction Hamiltonian with explicit drive oscillations.

    Couplings only; the diagonal has been rotated into the phase factors
    exp(i delta t) (qubit-target) and exp(i (delta - eps) t)
    (qubit-unwanted). Used as an independent cross-check of the dressed
    static frame: conjugating a propagation of this Hamiltonian by the
    dressing map and the diagonal rotating-frame map must reproduce the
    :func:`h_cpt` evolution.
    """
    t, om_o, om_c = _drive_amplitudes(plan, t)
    H = _alloc(t.shape)
    delta = plan.delta
    # Per-leg amplitude: half the dressed-frame envelope convention.
    c = 0.5 * (om_o - 1j * om_c)
    ph_t = np.exp(1j * delta * t) * c
    ph_u = np.exp(1j * (delta - params.eps) * t) * c
    lam = (params.lambda0, params.lambda1)
    for j in (LAB_Q0, LAB_Q1):
        H[..., j, TARGET] = ph_t
        H[..., TARGET, j] = ph_t.conj()
        H[..., j, UNWANTED] = lam[j] * ph_u
        H[..., UNWANTED, j] = lam[j] * ph_u.conj()
    return H


def h_crosstalk(params, plan, t):
    """Lab-frame Hamiltonian with each drive also addressing the other leg.

    The opposite-leg terms ride at the ground-state splitting omega_s
    with cross coupling ratios kappa01 = E0/E1 and kappa10 = E1/E0 (and
    lambda-scaled versions on the unwanted transitions). The two legs
    see opposite rotation phases, exp(-i omega_s t) on leg 0 and
    exp(+i omega_s t) on leg 1: the stray field addressing each leg is
    detuned by the ground-state splitting in opposite directions. This
    is what makes the dressed-frame image carry the (1 + cos(omega_s t))
    and sin(omega_s t) modulations; a common phase on both legs would
    cancel the dark-target term entirely at kappa = 1. With
    kappa01 = kappa10 = 0 this reduces exactly to the dressed-frame
    model conjugated back to the lab basis.
    """
    t, om_o, om_c = _drive_amplitudes(plan, t)
    H = _alloc(t.shape)
    delta = plan.delta
    H[..., LAB_Q0, LAB_Q0] = 0.5 * delta
    H[..., LAB_Q1, LAB_Q1] = 0.5 * delta
    H[..., TARGET, TARGET] = -0.5 * delta
    H[..., UNWANTED, UNWANTED] = -0.5 * delta + params.eps

    c = 0.5 * (om_o - 1j * om_c)
    ph = np.exp(-1j * params.omega_s * t)
    a0 = c * (1.0 + ph * params.kappa10)
    a1 = c * (1.0 + ph.conj() * params.kappa01)
    H[..., LAB_Q0, TARGET] = a0
    H[..., TARGET, LAB_Q0] = a0.conj()
    H[..., LAB_Q0, UNWANTED] = params.lambda0 * a0
    H[..., UNWANTED, LAB_Q0] = params.lambda0 * a0.conj()
    H[..., LAB_Q1, TARGET] = a1
    H[..., TARGET, LAB_Q1] = a1.conj()
    H[..., LAB_Q1, UNWANTED] = params.lambda1 * a1
    H[..., UNWANTED, LAB_Q1] = params.lambda1 * a1.conj()
    return H


def h_drag_orders(params, t):
    """Zeroth- and first-order corrected-frame Hamiltonians on {D, B, t}.

    Exposed for verification only; gate simulation always propagates the
    full four-level dressed Hamiltonian with corrected pulses. Uses the
    bare ``params.delta`` and the plain sech envelope.

    Returns
    -------
    (H0, H1) : pair of ndarray
        3x3 blocks (stacked if ``t`` is an array). H0 is the ideal
        two-level drive padded with the dark state; H1 holds the
        second-order light shifts that survive the decoupling.
    """
    t = np.asarray(t, dtype=float)
    om = sech_envelope(params.sigma, params.t_g, t)
    l0, l1 = params.lambda0, params.lambda1
    eps = params.eps
    H0 = np.zeros(t.shape + (3, 3), dtype=np.complex128)
    H0[..., 0, 0] = 0.5 * params.delta
    H0[..., 1, 1] = 0.5 * params.delta
    H0[..., 2, 2] = -0.5 * params.delta
    H0[..., 1, 2] = om
    H0[..., 2, 1] = om

    om2 = om * om
    H1 = np.zeros(t.shape + (3, 3), dtype=np.complex128)
    H1[..., 0, 0] = -((l0 - l1) ** 2) * om2 / (8.0 * eps)
    H1[..., 0, 1] = (l1 ** 2 - l0 ** 2) * om2 / (8.0 * eps)
    H1[..., 1, 0] = H1[..., 0, 1]
    H1[..., 1, 1] = -((l0 + l1) ** 2) * om2 / (16.0 * eps)
    H1[..., 2, 2] = -((l0 + l1) ** 2) * om2 / (16.0 * eps)
    return H0, H1


def s1_generator(params, plan, t):
    """First-order decoupling generator S1 (dimensionless, order 1/(eps t_g)).

    Hermitian, supported on the quadrature components of the
    dark-unwanted and bright-unwanted transitions:

        s_{c,D,u} = -(lambda0 - lambda1) t_g omega_o(t) / (2 sqrt(2))
        s_{c,B,u} = -(lambda0 + lambda1) t_g omega_o(t) / (2 sqrt(2))

    with omega_o the plan's (sqrt(2)-scaled) in-phase envelope. The
    physical generator is S1/(eps t_g); since both elements share the
    envelope's time profile, exp(-i S) has a constant matrix direction
    and its frame derivative is exactly -(dW/dt) times that direction.
    Boundary values are exponentially small for the default gate window,
    which is what lets the transformation start and end at the identity.
    """
    t = np.asarray(t, dtype=float)
    om_o = np.asarray(plan.omega_o(t), dtype=float)
    om_o = np.broadcast_to(om_o, t.shape)
    a = -plan.t_g * om_o / (2.0 * SQRT2)
    s_du = (params.lambda0 - params.lambda1) * a
    s_bu = (params.lambda0 + params.lambda1) * a
    S = _alloc(t.shape)
    S[..., UNWANTED, DARK] = 1j * s_du
    S[..., DARK, UNWANTED] = -1j * s_du
    S[..., UNWANTED, BRIGHT] = 1j * s_bu
    S[..., BRIGHT, UNWANTED] = -1j * s_bu
    return S


def lindblad_generators(gamma):
    """Four lab-frame emission operators sqrt(gamma) |i><j|.

    i runs over the qubit states, j over the excited states, so the sum
    of L^dag L is 2 gamma (P_t + P_u). Conjugate with
    :func:`cpt_transform` to express them in the dressed frame (the map
    is time independent, so the dissipator transforms covariantly).
    """
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    root = math.sqrt(gamma)
    ops = []
    for i in (LAB_Q0, LAB_Q1):
        for j in (TARGET, UNWANTED):
            L = np.zeros((4, 4), dtype=np.complex128)
            L[i, j] = root
            ops.append(L)
    return ops
