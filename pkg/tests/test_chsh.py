import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from belllab import (
    SeparableStateError,
    TwoQubitState,
    UnitVector3,
    canonical_state,
    chsh_value,
    chsh_value_symmetric,
    correlation_closed,
    correlation_matrix,
    gisin_settings,
    joint_probabilities,
    make_unit_vector,
    max_violation,
    projector,
    projector_product,
)
from belllab.chsh import MeasurementSettings
from helpers import random_coefficients, random_settings, random_state, random_unit_vector

INV_SQRT2 = 1.0 / math.sqrt(2.0)
TSIRELSON = 2.0 * math.sqrt(2.0)

X = UnitVector3(1, 0, 0)
Z = UnitVector3(0, 0, 1)


class TestProjector:
    def test_plus_z(self):
        np.testing.assert_array_equal(projector(Z), np.diag([1.0 + 0j, 0.0]))

    def test_minus_z(self):
        np.testing.assert_array_equal(projector(-Z), np.diag([0.0 + 0j, 1.0]))

    def test_plus_x(self):
        np.testing.assert_allclose(projector(X), 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_idempotent_hermitian_rank_one(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            p = projector(random_unit_vector(rng))
            np.testing.assert_allclose(p @ p, p, atol=1e-12)
            np.testing.assert_allclose(p, p.conj().T, atol=1e-12)
            evals = np.sort(np.linalg.eigvalsh(p))
            np.testing.assert_allclose(evals, [0.0, 1.0], atol=1e-12)


class TestProjectorProduct:
    def test_antipodal_gives_zero(self):
        np.testing.assert_allclose(
            projector_product(Z, -Z), np.zeros((2, 2)), atol=1e-15
        )

    def test_equal_directions_idempotence(self):
        np.testing.assert_allclose(projector_product(Z, Z), projector(Z), atol=1e-15)

    def test_orthogonal_directions_trace(self):
        m = projector_product(Z, X)
        assert np.trace(m) == pytest.approx(0.5, abs=1e-15)
        np.testing.assert_allclose(m, projector(Z) @ projector(X), atol=1e-15)

    def test_matches_explicit_multiplication(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            a, b = random_unit_vector(rng), random_unit_vector(rng)
            np.testing.assert_allclose(
                projector_product(a, b), projector(a) @ projector(b), atol=1e-12
            )

    def test_zero_only_for_antipodal(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            a, b = random_unit_vector(rng), random_unit_vector(rng)
            if a.dot(b) > -1.0 + 1e-6:
                assert np.abs(projector_product(a, b)).max() > 1e-12


class TestCorrelationMatrix:
    def test_singlet_equal_settings(self):
        singlet = canonical_state(INV_SQRT2, -INV_SQRT2)
        rng = np.random.default_rng(14)
        for _ in range(20):
            n = random_unit_vector(rng)
            assert correlation_matrix(singlet, n, n) == pytest.approx(-1.0, abs=1e-12)

    def test_bell_state_zz(self):
        state = canonical_state(INV_SQRT2, INV_SQRT2)
        assert correlation_matrix(state, Z, Z) == pytest.approx(-1.0, abs=1e-12)

    def test_bell_state_xx(self):
        state = canonical_state(INV_SQRT2, INV_SQRT2)
        assert correlation_matrix(state, X, X) == pytest.approx(1.0, abs=1e-12)

    def test_projector_route_agrees(self):
        # <(2a - 1) (x) (2b - 1)> expanded through the projectors.
        rng = np.random.default_rng(15)
        eye = np.eye(2)
        for _ in range(100):
            state, a, b = random_state(rng), random_unit_vector(rng), random_unit_vector(rng)
            op = np.kron(2.0 * projector(a) - eye, 2.0 * projector(b) - eye)
            expected = float(np.vdot(state.amplitudes, op @ state.amplitudes).real)
            assert correlation_matrix(state, a, b) == pytest.approx(expected, abs=1e-12)

    def test_bounded_by_one(self):
        rng = np.random.default_rng(16)
        for _ in range(500):
            val = correlation_matrix(random_state(rng), random_unit_vector(rng), random_unit_vector(rng))
            assert abs(val) <= 1.0 + 1e-12


class TestCorrelationClosed:
    def test_z_settings_any_coefficients(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            c1, c2 = random_coefficients(rng)
            assert correlation_closed(c1, c2, Z, Z) == pytest.approx(-1.0, abs=1e-12)

    def test_singlet_reduces_to_minus_dot(self):
        rng = np.random.default_rng(18)
        for _ in range(50):
            a, b = random_unit_vector(rng), random_unit_vector(rng)
            got = correlation_closed(INV_SQRT2, -INV_SQRT2, a, b)
            assert got == pytest.approx(-a.dot(b), abs=1e-12)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            correlation_closed(1.0, 1.0, Z, Z)

    def test_agrees_with_matrix_route(self):
        rng = np.random.default_rng(19)
        for _ in range(2000):
            c1, c2 = random_coefficients(rng)
            a, b = random_unit_vector(rng), random_unit_vector(rng)
            closed = correlation_closed(c1, c2, a, b)
            matrix = correlation_matrix(canonical_state(c1, c2), a, b)
            assert abs(closed - matrix) < 1e-12


class TestJointProbabilities:
    def test_singlet_perfect_anticorrelation(self):
        jp = joint_probabilities(canonical_state(INV_SQRT2, -INV_SQRT2), Z, Z)
        assert jp.as_tuple() == pytest.approx((0.0, 0.5, 0.5, 0.0), abs=1e-12)

    def test_completeness(self):
        rng = np.random.default_rng(20)
        for _ in range(200):
            jp = joint_probabilities(random_state(rng), random_unit_vector(rng), random_unit_vector(rng))
            assert sum(jp.as_tuple()) == pytest.approx(1.0, abs=1e-12)

    def test_bell_state_xx_born_oracle(self):
        # Explicit 4x4 projector expectation, independently assembled.
        state = canonical_state(INV_SQRT2, INV_SQRT2)
        psi = state.amplitudes
        pi_plus = 0.5 * (np.eye(2) + np.array([[0, 1], [1, 0]], dtype=complex))
        pi_minus = np.eye(2) - pi_plus
        expected = tuple(
            float(np.vdot(psi, np.kron(pa, pb) @ psi).real)
            for pa in (pi_plus, pi_minus)
            for pb in (pi_plus, pi_minus)
        )
        assert expected == pytest.approx((0.5, 0.0, 0.0, 0.5), abs=1e-12)
        assert joint_probabilities(state, X, X).as_tuple() == pytest.approx(expected, abs=1e-12)

    def test_correlation_consistency(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            state = random_state(rng)
            a, b = random_unit_vector(rng), random_unit_vector(rng)
            jp = joint_probabilities(state, a, b)
            assert jp.correlation() == pytest.approx(
                correlation_matrix(state, a, b), abs=1e-12
            )


def _product_state(rng) -> TwoQubitState:
    qa = rng.normal(size=2) + 1j * rng.normal(size=2)
    qb = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps = np.kron(qa / np.linalg.norm(qa), qb / np.linalg.norm(qb))
    return TwoQubitState(amps)


class TestChshValue:
    def test_product_states_respect_local_bound(self):
        rng = np.random.default_rng(22)
        for _ in range(300):
            val = chsh_value(_product_state(rng), random_settings(rng))
            assert val <= 2.0 + 1e-9

    def test_maximally_entangled_reaches_tsirelson(self):
        state = canonical_state(INV_SQRT2, INV_SQRT2)
        val = chsh_value(state, gisin_settings(INV_SQRT2, INV_SQRT2))
        assert val == pytest.approx(TSIRELSON, abs=1e-12)

    def test_matches_max_violation_at_gisin_settings(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            c1, c2 = random_coefficients(rng)
            val = chsh_value(canonical_state(c1, c2), gisin_settings(c1, c2))
            assert abs(val - max_violation(c1, c2)) < 1e-9

    def test_strict_violation_whenever_entangled(self):
        rng = np.random.default_rng(24)
        for _ in range(100):
            c1, c2 = random_coefficients(rng)
            assert chsh_value(canonical_state(c1, c2), gisin_settings(c1, c2)) > 2.0

    def test_symmetric_variant_coincides_at_gisin_settings(self):
        rng = np.random.default_rng(25)
        for _ in range(50):
            c1, c2 = random_coefficients(rng)
            state, s = canonical_state(c1, c2), gisin_settings(c1, c2)
            assert chsh_value_symmetric(state, s) == pytest.approx(
                chsh_value(state, s), abs=1e-12
            )

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(26)
        for _ in range(50):
            state = random_state(rng)
            phase = np.exp(1j * rng.uniform(0, 2 * math.pi))
            shifted = TwoQubitState(phase * state.amplitudes)
            s = random_settings(rng)
            assert abs(chsh_value(state, s) - chsh_value(shifted, s)) < 1e-12

    def test_first_term_identity_at_alpha_zero(self):
        # With a along z and b, b' in the xz-plane, |P(a,b) - P(a,b')| is
        # |cos(beta) - cos(beta')| regardless of the coefficients.
        rng = np.random.default_rng(27)
        for _ in range(100):
            c1, c2 = random_coefficients(rng)
            state = canonical_state(c1, c2)
            beta, beta_p = rng.uniform(0, math.pi, 2)
            b = make_unit_vector(beta, 0.0)
            bp = make_unit_vector(beta_p, 0.0)
            got = abs(correlation_matrix(state, Z, b) - correlation_matrix(state, Z, bp))
            assert got == pytest.approx(abs(math.cos(beta) - math.cos(beta_p)), abs=1e-12)

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_tsirelson_bound_property(self, seed):
        rng = np.random.default_rng(seed)
        val = chsh_value(random_state(rng), random_settings(rng))
        assert val <= TSIRELSON + 1e-6


class TestGisinSettings:
    def test_half_product_angles(self):
        s = gisin_settings(INV_SQRT2, INV_SQRT2)  # |c1 c2| = 1/2
        assert s.b.z == pytest.approx(math.cos(math.pi / 4), abs=1e-12)
        assert s.b.x == pytest.approx(math.sin(math.pi / 4), abs=1e-12)
        assert s.b_prime.z == pytest.approx(math.cos(3 * math.pi / 4), abs=1e-12)
        assert s.b_prime.x == pytest.approx(math.sin(3 * math.pi / 4), abs=1e-12)

    def test_trig_identity(self):
        rng = np.random.default_rng(28)
        for _ in range(50):
            c1, c2 = random_coefficients(rng)
            s = gisin_settings(c1, c2)
            assert s.b.x ** 2 + s.b.z ** 2 == pytest.approx(1.0, abs=1e-12)
            assert s.b.x == pytest.approx(s.b_prime.x, abs=1e-12)  # sin beta = sin beta'
            assert s.b.z == pytest.approx(-s.b_prime.z, abs=1e-12)

    def test_negative_product_flips_a_prime(self):
        s = gisin_settings(INV_SQRT2, -INV_SQRT2)
        assert (s.a_prime.x, s.a_prime.y, s.a_prime.z) == (-1.0, 0.0, 0.0)
        s = gisin_settings(INV_SQRT2, INV_SQRT2)
        assert (s.a_prime.x, s.a_prime.y, s.a_prime.z) == (1.0, 0.0, 0.0)

    def test_positive_sines(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            c1, c2 = random_coefficients(rng)
            s = gisin_settings(c1, c2)
            assert s.b.x > 0.0 and s.b_prime.x > 0.0
            assert s.b.z > 0.0 > s.b_prime.z  # beta' in (pi/2, pi)

    def test_separable_rejected(self):
        with pytest.raises(SeparableStateError):
            gisin_settings(1.0, 0.0)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            gisin_settings(0.9, 0.9)


class TestMaxViolation:
    def test_maximal_entanglement(self):
        assert max_violation(INV_SQRT2, INV_SQRT2) == pytest.approx(TSIRELSON, abs=1e-12)
        assert max_violation(INV_SQRT2, -INV_SQRT2) == pytest.approx(TSIRELSON, abs=1e-12)

    def test_separable_limit(self):
        assert max_violation(1.0, 0.0) == pytest.approx(2.0, abs=1e-15)

    def test_product_point_four_value(self):
        # c1*c2 = 0.4 -> 2*sqrt(1.64)
        c1 = math.sqrt((1.0 + 0.6) / 2.0)
        c2 = math.sqrt((1.0 - 0.6) / 2.0)
        assert c1 * c2 == pytest.approx(0.4, abs=1e-12)
        assert max_violation(c1, c2) == pytest.approx(2.0 * math.sqrt(1.64), abs=1e-12)

    def test_grid_sweep_oracle_at_product_point_four(self):
        # Dense sweep over (beta, beta') with alpha = 0, alpha' = pi/2 must
        # approach but never exceed the closed-form maximum.
        c1 = math.sqrt((1.0 + 0.6) / 2.0)
        c2 = math.sqrt((1.0 - 0.6) / 2.0)
        beta = np.linspace(0.0, math.pi, 1000)[:, None]
        beta_p = np.linspace(0.0, math.pi, 1000)[None, :]
        p_ab = -np.cos(beta) + 0.0 * beta_p
        p_abp = -np.cos(beta_p) + 0.0 * beta
        p_apb = 2 * c1 * c2 * np.sin(beta) + 0.0 * beta_p
        p_apbp = 2 * c1 * c2 * np.sin(beta_p) + 0.0 * beta
        sweep = np.abs(p_ab - p_abp) + p_apb + p_apbp
        expected = 2.0 * math.sqrt(1.64)
        assert sweep.max() <= expected + 1e-9
        assert expected - sweep.max() < 1e-4
        assert max_violation(c1, c2) == pytest.approx(expected, abs=1e-12)

    def test_range(self):
        rng = np.random.default_rng(30)
        for _ in range(100):
            c1, c2 = random_coefficients(rng)
            assert 2.0 <= max_violation(c1, c2) <= TSIRELSON + 1e-12
