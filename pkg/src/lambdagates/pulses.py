"""Closed-form pulse design for sech-driven gates in a four-level system.

Three strategies are supported, all built on hyperbolic-secant envelopes:

``uncorrected``
    Plain transitionless sech drive; the static detuning is chosen by
    inverting the two-level phase relation phi = 2 arctan(sigma/delta),
    ignoring the unwanted level entirely.
``exact``
    Same envelopes, but the detuning is a root of the quadratic obtained
    by requiring the *difference* of the bright-target and dark-unwanted
    passage phases to equal the requested rotation.  Valid when the two
    couplings to the unwanted level are locked to a mixing angle
    (lambda0 = -tan(eta) = -1/lambda1).
``drag``
    Derivative-shaped quadrature correction plus a rescaled in-phase
    envelope and a compensating detuning, for freely chosen couplings of
    equal sign.

Envelope normalization convention (used consistently by the Hamiltonian
builders in :mod:`lambdagates.model`): a plan's ``omega_o``/``omega_c``
are the per-leg dressed-frame amplitudes, which carry the sqrt(2)
collective-enhancement factor of the bright state.  Concretely, for the
plain strategies ``omega_o(t) = sqrt(2) * sigma * sech(sigma (t - t_g/2))``,
which puts the bright-target Rabi peak at exactly ``sigma`` and makes the
passage transitionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .numerics import wrap_angle

__all__ = [
    "SQRT2",
    "sech",
    "sech_envelope",
    "sech_envelope_derivative",
    "sech_phase",
    "total_phase_dependent",
    "exact_detuning",
    "drag_envelopes",
    "drag_theta",
    "drag_detuning",
    "PulsePlan",
    "build_pulse_plan",
    "STRATEGIES",
]

SQRT2 = math.sqrt(2.0)

STRATEGIES = ("uncorrected", "exact", "drag")


def sech(x):
    """Numerically safe hyperbolic secant, elementwise."""
    ax = np.abs(np.asarray(x, dtype=float))
    e = np.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


def sech_envelope(sigma, t_g, t):
    """sigma * sech(sigma (t - t_g/2)): peak ``sigma``, centered on the gate.

    Parameters
    ----------
    sigma : float
        Bandwidth (energy units); also the peak amplitude.
    t_g : float
        Gate time. The envelope is symmetric about ``t_g / 2``.
    t : float or ndarray
        Evaluation time(s).
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return sigma * sech(sigma * (np.asarray(t, dtype=float) - 0.5 * t_g))


def sech_envelope_derivative(sigma, t_g, t):
    """Analytic time derivative of :func:`sech_envelope`.

    Equals ``-sigma^2 sech(x) tanh(x)`` with ``x = sigma (t - t_g/2)``.
    Kept analytic on purpose: a finite difference would couple the pulse
    design to the integrator step size.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = sigma * (np.asarray(t, dtype=float) - 0.5 * t_g)
    return -(sigma ** 2) * sech(x) * np.tanh(x)


def sech_phase(sigma, delta):
    """Phase 2 arctan(sigma/delta) acquired by the returning ground state.

    This is the full phase imprinted on the driven ground state by a
    transitionless sech passage at detuning ``delta``. It is odd in
    ``delta`` and lies in (-pi, pi]. The resonant point ``delta = 0`` is
    defined as ``pi`` by continuity from delta -> 0+ (the two one-sided
    limits +-pi describe the same physical phase).
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if delta == 0.0:
        return math.pi
    return 2.0 * math.atan(sigma / delta)


def total_phase_dependent(sigma, delta, eps):
    """Net rotation phase when both dressed two-level blocks are driven.

    With couplings locked to a mixing angle the four-level problem splits
    into a bright-target block at detuning ``delta`` and a dark-unwanted
    block at detuning ``delta - eps``; each ground state returns with its
    own sech-passage phase, and the gate rotation is their difference::

        phi_tot = 2 arctan(sigma/delta) - 2 arctan(sigma/(delta - eps))

    The two branch phases are evaluated separately (each as in
    :func:`sech_phase`) instead of through the combined single-arctan
    form, which has branch-cut errors where (delta - eps) delta + sigma^2
    crosses zero.
    """
    return sech_phase(sigma, delta) - sech_phase(sigma, delta - eps)


def exact_detuning(sigma, eps, phi_abs, branch="minus"):
    """Detuning that makes the net rotation phase exactly ``-phi_abs``.

    Setting ``total_phase_dependent(sigma, delta, eps) = -phi_abs`` and
    clearing the arctangents gives the quadratic

        delta^2 - eps*delta + sigma^2 - sigma*eps*cot(phi_abs/2) = 0

    whose roots are ``(eps +- sqrt(disc))/2`` with
    ``disc = eps^2 + 4 eps sigma cot(phi_abs/2) - 4 sigma^2``.  The
    default ``minus`` branch recovers the ideal-system value
    ``-sigma cot(phi_abs/2)`` as eps -> infinity, consistent with the
    negative-detuning drive convention.

    Every returned root is validated by round trip through
    :func:`total_phase_dependent`; the comparison is taken modulo 2 pi
    because clearing the arctangents identifies phases that differ by a
    full turn (boundary roots such as delta = 0 land on the wrapped
    representative).

    Raises
    ------
    ValueError
        If ``phi_abs`` is outside (0, 2 pi), the branch name is unknown,
        or the discriminant is negative (no real detuning implements the
        requested rotation at this sigma/eps).
    """
    if sigma <= 0 or eps <= 0:
        raise ValueError(f"sigma and eps must be positive, got sigma={sigma}, eps={eps}")
    if not 0.0 < phi_abs < 2.0 * math.pi:
        raise ValueError(f"phi_abs must lie in (0, 2*pi), got {phi_abs}")
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")

    half = 0.5 * phi_abs
    cot = math.cos(half) / math.sin(half)
    disc = eps * eps + 4.0 * eps * sigma * cot - 4.0 * sigma * sigma
    if disc < 0.0:
        # Allow a roundoff-level graze of the marginal case.
        if disc > -1e-12 * max(eps * eps, sigma * sigma):
            disc = 0.0
        else:
            raise ValueError(
                f"no real detuning implements |phi| = {phi_abs:.6g} at "
                f"sigma = {sigma:.6g}, eps = {eps:.6g} "
                f"(discriminant = {disc:.6g} < 0)"
            )
    root = math.sqrt(disc)
    delta = 0.5 * (eps - root) if branch == "minus" else 0.5 * (eps + root)

    achieved = total_phase_dependent(sigma, delta, eps)
    residual = float(wrap_angle(achieved + phi_abs))
    if abs(residual) > 1e-10:
        raise ValueError(
            f"detuning root failed the round-trip check: achieved phase "
            f"{achieved:.12g} vs target {-phi_abs:.12g} (wrapped residual "
            f"{residual:.3e})"
        )
    return float(delta)


def drag_envelopes(sigma, t_g, delta, eps, lambda0, lambda1, t):
    """First-order derivative-correction envelopes (omega_o, omega_c).

    omega_o(t) = sqrt(2) (1 + delta (lambda0+lambda1)^2 / (16 eps)) W(t)
    omega_c(t) = sqrt(2) (lambda0+lambda1)^2 / (16 eps) * dW/dt

    with W the sech envelope. The in-phase rescaling and the quadrature
    derivative term together cancel the bright-unwanted coupling at first
    order in 1/(eps t_g). ``delta`` is the detuning of the pulse the
    correction is built around (not any retuned value applied afterwards).
    """
    if eps <= 0:
        raise ValueError(
            f"eps must be positive (the correction scales as 1/eps), got {eps}"
        )
    base = sech_envelope(sigma, t_g, t)
    dbase = sech_envelope_derivative(sigma, t_g, t)
    pref = (lambda0 + lambda1) ** 2 / (16.0 * eps)
    omega_o = SQRT2 * (1.0 + delta * pref) * base
    omega_c = SQRT2 * pref * dbase
    return omega_o, omega_c


def drag_theta(sigma, eps, lambda0, lambda1):
    """Relative phase induced on the qubit by the first-order correction.

    theta = -(lambda0^2 + lambda1^2 - 6 lambda0 lambda1) * sigma / (4 eps)
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return -(lambda0 ** 2 + lambda1 ** 2 - 6.0 * lambda0 * lambda1) * sigma / (4.0 * eps)


def drag_detuning(sigma, phi_target, theta):
    """Compensating detuning delta' = sigma / tan((phi_target + theta)/2).

    Retunes the drive so the passage phase absorbs the correction-induced
    shift ``theta`` on top of the requested rotation. Evaluated as
    ``sigma cos(x)/sin(x)`` so the zero at ``phi_target + theta = pi`` is
    exact; the singular points where the half angle is a multiple of pi
    are rejected.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = 0.5 * (phi_target + theta)
    s = math.sin(x)
    if abs(s) < 1e-12:
        raise ValueError(
            f"detuning compensation is singular at phi_target + theta = "
            f"{phi_target + theta:.6g} (multiple of 2*pi)"
        )
    return float(sigma * math.cos(x) / s)


def _zero_envelope(t):
    return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class PulsePlan:
    """A fully resolved drive: envelopes, detuning and strategy tag.

    ``omega_o`` and ``omega_c`` are vectorized callables of time holding
    the per-leg dressed-frame amplitudes (see the module docstring for
    the normalization). ``drag_phase`` records the compensated phase
    shift for the drag strategy (zero otherwise) and ``drive_scale``
    tracks any overall amplitude rescaling applied after construction.
    """

    strategy: str
    sigma: float
    t_g: float
    delta: float
    omega_o: Callable = field(repr=False)
    omega_c: Callable = field(repr=False)
    theta_cpt: float = math.pi / 2.0
    alpha_cpt: float = 0.0
    phi_target: Optional[float] = None
    drag_phase: float = 0.0
    drive_scale: float = 1.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )
        if self.sigma <= 0 or self.t_g <= 0:
            raise ValueError(
                f"sigma and t_g must be positive, got sigma={self.sigma}, t_g={self.t_g}"
            )

    def with_drive_scale(self, scale):
        """Return a copy with both envelopes multiplied by ``scale``."""
        f_o, f_c = self.omega_o, self.omega_c
        return replace(
            self,
            omega_o=lambda t: scale * f_o(t),
            omega_c=lambda t: scale * f_c(t),
            drive_scale=self.drive_scale * scale,
        )

    def tail_fraction(self):
        """Envelope magnitude at the gate-window edges, relative to peak.

        The sech tails are truncated at t = 0 and t = t_g; this records
        how large the cut is (sech(sigma t_g / 2), about 6.7e-4 for the
        default window t_g = 16/sigma).
        """
        return float(sech(0.5 * self.sigma * self.t_g))


def build_pulse_plan(params, strategy, phi_target):
    """Resolve a strategy into a concrete :class:`PulsePlan`.

    Parameters
    ----------
    params : SystemParams
        Physical parameters; supplies sigma, t_g, eps and the couplings.
    strategy : str
        One of ``uncorrected``, ``exact``, ``drag``.
    phi_target : float
        Requested rotation angle (radians). The drive design works on the
        negative-detuned branch, so rotation angles are taken negative;
        see :func:`exact_detuning` for the dependent-coupling case.
    """
    if strategy not in STRATEGIES:
        raise ValueError(
            f"unknown strategy {strategy!r}; expected one of {STRATEGIES}"
        )
    sigma = params.sigma
    t_g = params.t_g
    half = 0.5 * phi_target
    if abs(math.sin(half)) < 1e-12:
        raise ValueError(
            f"phi_target = {phi_target:.6g} is a multiple of 2*pi; "
            f"no finite detuning implements a trivial rotation"
        )

    if strategy == "uncorrected":
        delta = sigma * math.cos(half) / math.sin(half)
        return PulsePlan(
            strategy=strategy,
            sigma=sigma,
            t_g=t_g,
            delta=float(delta),
            omega_o=lambda t: SQRT2 * sech_envelope(sigma, t_g, t),
            omega_c=_zero_envelope,
            phi_target=phi_target,
        )

    if strategy == "exact":
        if params.coupling_mode != "dependent":
            raise ValueError(
                "the exact detuning construction assumes dependent couplings "
                "(lambda0 = -tan(eta) = -1/lambda1); got coupling_mode="
                f"{params.coupling_mode!r}"
            )
        delta = exact_detuning(sigma, params.eps, abs(phi_target), "minus")
        return PulsePlan(
            strategy=strategy,
            sigma=sigma,
            t_g=t_g,
            delta=delta,
            omega_o=lambda t: SQRT2 * sech_envelope(sigma, t_g, t),
            omega_c=_zero_envelope,
            phi_target=phi_target,
        )

    # drag
    theta = drag_theta(sigma, params.eps, params.lambda0, params.lambda1)
    delta = drag_detuning(sigma, phi_target, theta)
    eps = params.eps
    l0, l1 = params.lambda0, params.lambda1
    # The in-phase rescaling belongs to the pulse being corrected, so it
    # is evaluated at that pulse's design detuning; the compensating
    # detuning delta only retunes the carrier.
    delta_design = sigma * math.cos(half) / math.sin(half)

    def omega_o(t, _s=sigma, _tg=t_g, _d=delta_design, _e=eps, _l0=l0, _l1=l1):
        return drag_envelopes(_s, _tg, _d, _e, _l0, _l1, t)[0]

    def omega_c(t, _s=sigma, _tg=t_g, _d=delta_design, _e=eps, _l0=l0, _l1=l1):
        return drag_envelopes(_s, _tg, _d, _e, _l0, _l1, t)[1]

    return PulsePlan(
        strategy=strategy,
        sigma=sigma,
        t_g=t_g,
        delta=delta,
        omega_o=omega_o,
        omega_c=omega_c,
        phi_target=phi_target,
        drag_phase=theta,
    )
