"""Unit tests for the Hamiltonian builders and frame maps.

The load-bearing check here is the frame identity: the lab-frame
interaction Hamiltonian, rotated by the diagonal detuning frame and
dressed by the CPT map, must reproduce the static dressed Hamiltonian
entry by entry at every time. Everything else (structure zeros, coupling
coefficients, dissipator normalization) is checked against hand-derived
values.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import lambdagates as lg
from lambdagates.model import (
    BRIGHT,
    DARK,
    TARGET,
    UNWANTED,
    SystemParams,
    cpt_transform,
    dependent_couplings,
    h_cpt,
    h_crosstalk,
    h_drag_orders,
    h_lab_interaction,
    lindblad_generators,
    s1_generator,
)
from lambdagates.pulses import (
    SQRT2,
    build_pulse_plan,
    sech_envelope,
    sech_envelope_derivative,
)

from conftest import dependent_params, independent_params

PI = math.pi


def hermiticity_dev(H):
    return float(np.max(np.abs(H - np.conj(np.swapaxes(H, -1, -2)))))


def zero_drive_plan(sigma=0.02, t_g=800.0, delta=-0.02):
    return lg.PulsePlan(
        strategy="uncorrected", sigma=sigma, t_g=t_g, delta=delta,
        omega_o=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        omega_c=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    )


class TestDependentCouplings:
    def test_symmetric_point(self):
        l0, l1 = dependent_couplings(PI / 4.0)
        assert l0 == pytest.approx(-1.0)
        assert l1 == pytest.approx(1.0)

    def test_pi_thirds(self):
        l0, l1 = dependent_couplings(PI / 3.0)
        assert l0 == pytest.approx(-math.sqrt(3.0))
        assert l1 == pytest.approx(1.0 / math.sqrt(3.0))

    @given(eta=st.floats(0.05, PI / 2.0 - 0.05))
    @settings(max_examples=60, deadline=None)
    def test_product_is_minus_one(self, eta):
        l0, l1 = dependent_couplings(eta)
        assert l0 * l1 == pytest.approx(-1.0, rel=1e-12)

    @pytest.mark.parametrize("eta", [0.0, PI / 2.0, PI, -PI / 2.0])
    def test_singular_angles_rejected(self, eta):
        with pytest.raises(ValueError, match="singular"):
            dependent_couplings(eta)


class TestSystemParams:
    def test_default_gate_window(self):
        p = SystemParams.independent(1.0, 1.0, eps=0.04, sigma=0.02)
        assert p.t_g == pytest.approx(16.0 / 0.02)

    def test_dependent_factory_locks_couplings(self):
        p = SystemParams.dependent(PI / 3.0, eps=0.04, sigma=0.02)
        assert p.coupling_mode == "dependent"
        assert p.lambda0 == pytest.approx(-math.sqrt(3.0))
        assert p.lambda1 == pytest.approx(1.0 / math.sqrt(3.0))

    def test_dependent_mode_rejects_unlocked_lambdas(self):
        with pytest.raises(ValueError, match="tan"):
            SystemParams(eps=0.04, sigma=0.02, lambda0=1.0, lambda1=1.0,
                         eta=PI / 4.0, coupling_mode="dependent")

    def test_dependent_mode_requires_eta(self):
        with pytest.raises(ValueError, match="eta"):
            SystemParams(eps=0.04, sigma=0.02, coupling_mode="dependent")

    @pytest.mark.parametrize("field, value", [
        ("eps", -0.04), ("sigma", 0.0), ("gamma", -1e-6), ("omega_s", -1e-6),
    ])
    def test_sign_validation(self, field, value):
        kw = dict(eps=0.04, sigma=0.02)
        kw[field] = value
        with pytest.raises(ValueError):
            SystemParams.independent(1.0, 1.0, **kw)


class TestCptTransform:
    def test_zero_angle_is_identity(self):
        assert np.allclose(cpt_transform(0.0), np.eye(4), atol=1e-15)

    def test_equal_weight_mixing(self):
        V = cpt_transform(PI / 2.0)
        inv = 1.0 / math.sqrt(2.0)
        assert V[DARK, 0] == pytest.approx(inv)
        assert V[DARK, 1] == pytest.approx(-inv)
        assert V[BRIGHT, 0] == pytest.approx(inv)
        assert V[BRIGHT, 1] == pytest.approx(inv)

    def test_identity_on_excited_states(self, rng):
        V = cpt_transform(rng.uniform(0, PI), rng.uniform(-PI, PI))
        assert V[TARGET, TARGET] == 1.0
        assert V[UNWANTED, UNWANTED] == 1.0
        assert np.allclose(V[2:, :2], 0.0) and np.allclose(V[:2, 2:], 0.0)

    def test_unitarity(self, rng):
        for _ in range(25):
            V = cpt_transform(rng.uniform(-PI, PI), rng.uniform(-PI, PI))
            assert lg.unitarity_deviation(V) < 1e-12


class TestHCpt:
    def test_static_diagonal(self):
        params = independent_params(0.8, 1.2, ratio=0.5)
        plan = zero_drive_plan(delta=-0.02)
        H = h_cpt(params, plan, 100.0)
        assert np.allclose(np.diag(H),
                           [-0.01, -0.01, 0.01, 0.01 + params.eps], atol=1e-15)
        assert np.allclose(H - np.diag(np.diag(H)), 0.0)

    def test_coupling_coefficients(self):
        params = independent_params(0.8, 1.2, ratio=0.5)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        t = 0.4 * params.t_g
        H = h_cpt(params, plan, t)
        amp = plan.omega_o(t) / SQRT2
        assert H[TARGET, BRIGHT] == pytest.approx(amp, rel=1e-14)
        assert H[UNWANTED, DARK] == pytest.approx(-0.2 * amp, rel=1e-13)
        assert H[UNWANTED, BRIGHT] == pytest.approx(1.0 * amp, rel=1e-13)
        # Undriven pairs stay zero.
        assert H[DARK, BRIGHT] == 0.0
        assert H[TARGET, DARK] == 0.0
        assert H[TARGET, UNWANTED] == 0.0

    def test_quadrature_enters_imaginary(self):
        params = independent_params(1.0, 1.0, ratio=0.3)
        plan = build_pulse_plan(params, "drag", -PI / 2.0)
        t = 0.3 * params.t_g
        H = h_cpt(params, plan, t)
        expected = (plan.omega_o(t) + 1j * plan.omega_c(t)) / SQRT2
        assert H[TARGET, BRIGHT] == pytest.approx(expected, rel=1e-13)
        assert abs(H[TARGET, BRIGHT].imag) > 0.0

    def test_symmetric_couplings_decouple_dark_state(self):
        params = independent_params(1.2, 1.2)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        H = h_cpt(params, plan, 0.5 * params.t_g)
        assert H[UNWANTED, DARK] == 0.0
        assert H[DARK, UNWANTED] == 0.0

    def test_locked_couplings_split_into_blocks(self):
        # eta = pi/4 gives lambda0 = -lambda1 = -1: the dressed system
        # splits into two independent two-level blocks {B,t} and {D,u}.
        # (tan(pi/4) is one ulp off 1, so "zero" means machine zero
        # relative to the drive scale.)
        params = dependent_params(eta=PI / 4.0, ratio=0.5)
        plan = build_pulse_plan(params, "exact", -PI / 2.0)
        floor = 1e-15 * params.sigma
        for t in np.linspace(0.0, params.t_g, 9):
            H = h_cpt(params, plan, float(t))
            for i, j in [(BRIGHT, DARK), (UNWANTED, BRIGHT),
                         (TARGET, DARK), (TARGET, UNWANTED)]:
                assert abs(H[i, j]) < floor
                assert abs(H[j, i]) < floor

    def test_vectorized_matches_scalar(self):
        params = independent_params(0.8, 1.2)
        plan = build_pulse_plan(params, "drag", -PI / 2.0)
        ts = np.linspace(0.0, params.t_g, 13)
        stacked = h_cpt(params, plan, ts)
        assert stacked.shape == (13, 4, 4)
        for k, t in enumerate(ts):
            assert np.allclose(stacked[k], h_cpt(params, plan, float(t)),
                               atol=1e-16)


class TestFrameIdentity:
    """Lab interaction frame vs dressed static frame, at the operator level."""

    @pytest.mark.parametrize("strategy, kwargs", [
        ("uncorrected", dict(lambda0=0.8, lambda1=1.2)),
        ("drag", dict(lambda0=1.0, lambda1=1.0)),
    ])
    def test_rotation_and_dressing_reproduce_h_cpt(self, strategy, kwargs):
        params = independent_params(ratio=0.4, **kwargs)
        plan = build_pulse_plan(params, strategy, -PI / 2.0)
        V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
        delta, eps = plan.delta, params.eps
        static = np.diag([0.5 * delta, 0.5 * delta,
                          -0.5 * delta, -0.5 * delta + eps]).astype(complex)
        for t in np.linspace(0.0, params.t_g, 17):
            t = float(t)
            W = np.diag(np.exp(1j * np.array(
                [-0.5 * delta, -0.5 * delta, 0.5 * delta, 0.5 * delta - eps]
            ) * t))
            H_int = h_lab_interaction(params, plan, t)
            rebuilt = V @ (W @ H_int @ W.conj().T + static) @ V.conj().T
            assert np.max(np.abs(rebuilt - h_cpt(params, plan, t))) < 1e-10

    def test_lab_interaction_has_no_diagonal(self):
        params = independent_params(0.8, 1.2)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        H = h_lab_interaction(params, plan, 0.37 * params.t_g)
        assert np.allclose(np.diag(H), 0.0)
        assert H[0, 1] == 0.0 and H[2, 3] == 0.0

    def test_unwanted_column_carries_couplings(self):
        params = independent_params(0.8, 1.2)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        H = h_lab_interaction(params, plan, 0.37 * params.t_g)
        assert H[0, UNWANTED] == pytest.approx(0.8 * H[0, TARGET]
                                               * np.exp(-1j * params.eps
                                                        * 0.37 * params.t_g),
                                               rel=1e-12)
        ratio = H[1, UNWANTED] / H[1, TARGET]
        assert abs(ratio) == pytest.approx(1.2, rel=1e-12)


class TestHCrosstalk:
    def test_no_crosstalk_reduces_to_dressed_model(self):
        params = independent_params(0.8, 1.2, ratio=0.4,
                                    omega_s=0.1 * 0.05, kappa01=0.0, kappa10=0.0)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
        for t in np.linspace(0.0, params.t_g, 7):
            image = V @ h_crosstalk(params, plan, float(t)) @ V.conj().T
            assert np.max(np.abs(image - h_cpt(params, plan, float(t)))) < 1e-14

    def test_dressed_image_modulations(self):
        # kappa = 1, lambda0 = -lambda1 = -1: the dressed image must carry
        # (1 + cos(omega_s t)) on the driven transitions and sin(omega_s t)
        # on the nominally dark ones; opposite leg phases are what produce
        # the sine terms (a common phase would cancel them).
        params = dependent_params(eta=PI / 4.0, ratio=0.4,
                                  omega_s=7.3e-3, kappa01=1.0, kappa10=1.0)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
        for t in (0.11, 0.43, 0.71, 0.98):
            t = float(t * params.t_g)
            M = V @ h_crosstalk(params, plan, t) @ V.conj().T
            c = 0.5 * float(plan.omega_o(t))
            wt = params.omega_s * t
            assert M[TARGET, BRIGHT] == pytest.approx(
                SQRT2 * c * (1.0 + math.cos(wt)), abs=1e-12)
            assert M[TARGET, DARK] == pytest.approx(
                SQRT2 * 1j * c * math.sin(wt), abs=1e-12)
            assert M[UNWANTED, DARK] == pytest.approx(
                -SQRT2 * c * (1.0 + math.cos(wt)), abs=1e-12)
            assert M[UNWANTED, BRIGHT] == pytest.approx(
                -SQRT2 * 1j * c * math.sin(wt), abs=1e-12)

    def test_static_part_matches_dressed_diagonal(self):
        params = independent_params(1.0, 1.0, omega_s=1e-3 * 0.04)
        plan = zero_drive_plan(delta=-0.02)
        H = h_crosstalk(params, plan, 123.0)
        assert np.allclose(np.diag(H),
                           [-0.01, -0.01, 0.01, 0.01 + params.eps], atol=1e-15)
        assert np.allclose(H - np.diag(np.diag(H)), 0.0)


class TestHDragOrders:
    def test_shapes(self):
        params = independent_params(1.0, 1.0, delta=-0.02)
        H0, H1 = h_drag_orders(params, 100.0)
        assert H0.shape == (3, 3) and H1.shape == (3, 3)
        ts = np.linspace(0.0, params.t_g, 5)
        H0s, H1s = h_drag_orders(params, ts)
        assert H0s.shape == (5, 3, 3) and H1s.shape == (5, 3, 3)

    def test_zeroth_order_is_padded_two_level_drive(self):
        params = independent_params(0.8, 1.2, delta=-0.02)
        t = 0.45 * params.t_g
        H0, _ = h_drag_orders(params, t)
        om = sech_envelope(params.sigma, params.t_g, t)
        assert np.allclose(np.diag(H0), [-0.01, -0.01, 0.01], atol=1e-15)
        assert H0[1, 2] == pytest.approx(om)
        assert H0[0, 1] == 0.0 and H0[0, 2] == 0.0

    def test_equal_couplings_light_shifts(self):
        # lambda0 = lambda1 = 1: diag(0, -W^2/4eps, -W^2/4eps), no off-diagonal.
        params = independent_params(1.0, 1.0, ratio=0.5, delta=-0.02)
        t = 0.45 * params.t_g
        _, H1 = h_drag_orders(params, t)
        shift = sech_envelope(params.sigma, params.t_g, t) ** 2 / (4.0 * params.eps)
        assert H1[0, 0] == 0.0
        assert H1[0, 1] == 0.0
        assert H1[1, 1] == pytest.approx(-shift, rel=1e-13)
        assert H1[2, 2] == pytest.approx(-shift, rel=1e-13)

    def test_unequal_couplings_entries(self):
        params = independent_params(0.8, 1.2, ratio=0.5, delta=-0.02)
        t = 0.45 * params.t_g
        _, H1 = h_drag_orders(params, t)
        om2 = sech_envelope(params.sigma, params.t_g, t) ** 2
        eps = params.eps
        assert H1[0, 0] == pytest.approx(-(0.4 ** 2) * om2 / (8.0 * eps), rel=1e-13)
        assert H1[0, 1] == pytest.approx((1.2 ** 2 - 0.8 ** 2) * om2 / (8.0 * eps),
                                         rel=1e-13)
        assert H1[1, 1] == pytest.approx(-(2.0 ** 2) * om2 / (16.0 * eps), rel=1e-13)


class TestS1Generator:
    def test_hermitian_and_supported_on_unwanted_row(self):
        params = independent_params(0.8, 1.2)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        S = s1_generator(params, plan, 0.4 * params.t_g)
        assert hermiticity_dev(S) < 1e-15
        support = np.zeros((4, 4), dtype=bool)
        support[UNWANTED, DARK] = support[DARK, UNWANTED] = True
        support[UNWANTED, BRIGHT] = support[BRIGHT, UNWANTED] = True
        assert np.all(S[~support] == 0.0)

    def test_equal_couplings_use_bright_leg_only(self):
        params = independent_params(1.0, 1.0)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        S = s1_generator(params, plan, 0.4 * params.t_g)
        assert S[UNWANTED, DARK] == 0.0
        assert abs(S[UNWANTED, BRIGHT]) > 0.0

    def test_opposite_couplings_use_dark_leg_only(self):
        params = dependent_params(eta=PI / 4.0)
        plan = build_pulse_plan(params, "exact", -PI / 2.0)
        S = s1_generator(params, plan, 0.4 * params.t_g)
        # lambda0 + lambda1 is one ulp off 0 at eta = pi/4, so compare
        # the legs instead of demanding a literal zero.
        assert abs(S[UNWANTED, BRIGHT]) < 1e-12 * abs(S[UNWANTED, DARK])
        assert abs(S[UNWANTED, DARK]) > 0.0

    def test_boundary_values_are_negligible(self):
        params = independent_params(1.0, 1.0)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        for t in (0.0, params.t_g):
            S = s1_generator(params, plan, t)
            assert np.linalg.norm(S) <= 1e-3 * params.t_g * params.sigma

    def test_constant_direction_derivative(self):
        # S(t) = f(t) * S0 with f the in-phase envelope, so dS/dt follows
        # the analytic envelope derivative exactly.
        params = independent_params(0.8, 1.2)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        t = 0.31 * params.t_g
        S = s1_generator(params, plan, t)
        direction = S / float(plan.omega_o(t))
        h = 1e-4
        fd = (s1_generator(params, plan, t + h)
              - s1_generator(params, plan, t - h)) / (2.0 * h)
        analytic = direction * SQRT2 * sech_envelope_derivative(
            params.sigma, params.t_g, t)
        assert np.max(np.abs(fd - analytic)) < 1e-8

    def test_first_order_decoupling_suppresses_unwanted_block(self):
        # exp(-i S1/(eps t_g)) must cancel the qubit-unwanted coupling at
        # leading order: the transformed block norm should sit well below
        # the bare one at a narrow bandwidth ratio.
        params = independent_params(0.8, 1.2, ratio=0.1)
        plan = build_pulse_plan(params, "uncorrected", -PI / 2.0)
        ts = np.linspace(0.0, params.t_g, 257)
        bare, transformed = [], []
        scale = 1.0 / (params.t_g * params.eps)
        for t in ts:
            t = float(t)
            H = h_cpt(params, plan, t)
            S_phys = scale * s1_generator(params, plan, t)
            A = lg.hermitian_expm(S_phys, 1.0)
            om = float(plan.omega_o(t))
            if om != 0.0:
                M = S_phys / om
                dom = SQRT2 * sech_envelope_derivative(params.sigma, params.t_g, t)
                HT = A.conj().T @ H @ A - dom * M
            else:
                HT = H
            bare.append(np.linalg.norm(H[:2, UNWANTED]))
            transformed.append(np.linalg.norm(HT[:2, UNWANTED]))
        assert np.mean(transformed) < np.mean(bare) / 5.0


class TestLindbladGenerators:
    def test_four_operators(self):
        ops = lindblad_generators(1e-4)
        assert len(ops) == 4
        root = math.sqrt(1e-4)
        for L in ops:
            nz = np.argwhere(L != 0)
            assert nz.shape == (1, 2)
            i, j = nz[0]
            assert i in (0, 1) and j in (TARGET, UNWANTED)
            assert L[i, j] == pytest.approx(root)

    def test_zero_rate_gives_zero_operators(self):
        for L in lindblad_generators(0.0):
            assert np.all(L == 0.0)

    def test_total_decay_rate(self):
        gamma = 3.7e-4
        total = sum(L.conj().T @ L for L in lindblad_generators(gamma))
        expected = np.diag([0.0, 0.0, 2.0 * gamma, 2.0 * gamma])
        assert np.allclose(total, expected, atol=1e-18)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError, match="gamma"):
            lindblad_generators(-1e-6)


class TestHermiticityEverywhere:
    def test_all_builders_hermitian_at_random_times(self, rng):
        params = independent_params(0.8, 1.2, ratio=0.4,
                                    omega_s=0.07 * 0.05, gamma=1e-4)
        plans = [
            build_pulse_plan(params, "uncorrected", -PI / 2.0),
            build_pulse_plan(params, "drag", -PI),
        ]
        dep = dependent_params(eta=PI / 3.0, ratio=0.4, omega_s=0.07 * 0.05)
        dep_plan = build_pulse_plan(dep, "exact", -PI / 2.0)
        ts = rng.uniform(0.0, params.t_g, size=100)
        for plan in plans:
            assert hermiticity_dev(h_cpt(params, plan, ts)) < 1e-12
            assert hermiticity_dev(h_lab_interaction(params, plan, ts)) < 1e-12
            assert hermiticity_dev(h_crosstalk(params, plan, ts)) < 1e-12
            assert hermiticity_dev(s1_generator(params, plan, ts)) < 1e-12
        assert hermiticity_dev(h_cpt(dep, dep_plan, ts)) < 1e-12
        assert hermiticity_dev(h_crosstalk(dep, dep_plan, ts)) < 1e-12
        H0, H1 = h_drag_orders(params, ts)
        assert hermiticity_dev(H0) < 1e-12
        assert hermiticity_dev(H1) < 1e-12
