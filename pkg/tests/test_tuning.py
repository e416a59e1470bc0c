import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from causal_jacobi.estimator import delayed_config
from causal_jacobi.jacobi import JacobiParams
from causal_jacobi.kernel import EstimatorConfig
from causal_jacobi.tuning import (
    NoInteriorMinimizer,
    bound_constants,
    bound_report,
    delayed_bound_constants,
    optimal_window,
    psi,
    psi_minimum,
    rate_exponent,
)

LEGENDRE = JacobiParams(0, 0)


class TestConstants:
    def test_mean_estimator(self):
        for M in (0.5, 1.0, 7.0):
            C, E = bound_constants(EstimatorConfig(0, 0, LEGENDRE, 0.0), M)
            assert E == pytest.approx(1.0, abs=1e-10)
            assert C == pytest.approx(M / 2, abs=1e-10)

    def test_delay_term(self):
        C, _ = bound_constants(EstimatorConfig(0, 0, LEGENDRE, 1.0), 1.0)
        assert C == pytest.approx(1.5, abs=1e-10)

    def test_first_derivative_q0(self):
        # Q = 6 (2u - 1): integral |Q| = 3, integral |u^2 Q| / 2 = 9/16
        C, E = bound_constants(EstimatorConfig(1, 0, LEGENDRE, 0.0), 1.0)
        assert E == pytest.approx(3.0, abs=1e-10)
        assert C == pytest.approx(9 / 16, abs=1e-10)

    def test_noise_gain_grows_with_q(self):
        _, e0 = bound_constants(EstimatorConfig(1, 0, LEGENDRE, 0.0), 1.0)
        _, e1 = bound_constants(EstimatorConfig(1, 1, LEGENDRE, 0.0), 1.0)
        assert e1 >= e0

    def test_h_irrelevant(self):
        a = bound_constants(EstimatorConfig(1, 1, LEGENDRE, 0.2, 0.1), 2.0)
        b = bound_constants(EstimatorConfig(1, 1, LEGENDRE, 0.2, 3.0), 2.0)
        assert a == b

    def test_negative_M(self):
        with pytest.raises(ValueError):
            bound_constants(EstimatorConfig(1, 0, LEGENDRE), -1.0)


class TestDelayed:
    def test_same_noise_gain(self):
        config = delayed_config(EstimatorConfig(1, 1, LEGENDRE))
        assert delayed_bound_constants(config, 1.0)[1] == pytest.approx(bound_constants(config, 1.0)[1], rel=1e-12)

    def test_delay_term_is_theta_cubed(self):
        config = delayed_config(EstimatorConfig(1, 1, LEGENDRE))
        C_with, _ = delayed_bound_constants(config, 1.0)
        poly_part = C_with - config.t_tau**3 / 6
        assert config.t_tau**3 / 6 == pytest.approx(0.276**3 / 6, rel=1e-2)
        assert poly_part > 0

    def test_rejects_wrong_t_tau(self):
        with pytest.raises(ValueError, match="smallest root"):
            delayed_bound_constants(EstimatorConfig(1, 1, LEGENDRE, 0.3), 1.0)

    def test_window_power_law(self):
        config = delayed_config(EstimatorConfig(1, 1, LEGENDRE))
        C, E = delayed_bound_constants(config, 3.0)
        ratio = optimal_window(C, E, 1, 1, 1e-3 / 8, delayed=True) / optimal_window(C, E, 1, 1, 1e-3, delayed=True)
        assert ratio == pytest.approx((1 / 8) ** (1 / 4), rel=1e-12)

    @pytest.mark.parametrize("a", [0, 1])
    @pytest.mark.parametrize("b", [0, 1])
    @pytest.mark.parametrize("n", [1, 2])
    def test_characterization_E_increases_C_decreases_in_q(self, a, b, n):
        params = JacobiParams(a, b)
        Es, Cs = [], []
        for q in range(4):
            C, E = delayed_bound_constants(delayed_config(EstimatorConfig(n, q, params)), 1.0)
            Es.append(E)
            Cs.append(C)
        assert all(x < y for x, y in zip(Es, Es[1:]))
        assert all(x > y for x, y in zip(Cs, Cs[1:]))

    def test_delayed_q1_beats_delay_free_q2(self):
        C1, E1 = delayed_bound_constants(delayed_config(EstimatorConfig(1, 1, LEGENDRE)), 1.0)
        C2, E2 = bound_constants(EstimatorConfig(1, 2, LEGENDRE, 0.0), 1.0)
        assert C1 < C2 and E1 < E2


class TestWindow:
    def test_example(self):
        assert optimal_window(1, 1, 1, 1, 1) == pytest.approx(0.5 ** (1 / 3), rel=1e-14)

    def test_power_law(self):
        for n, q in [(1, 0), (2, 1), (3, 2)]:
            ratio = optimal_window(2, 3, n, q, 1e-2 / 8) / optimal_window(2, 3, n, q, 1e-2)
            assert ratio == pytest.approx((1 / 8) ** (1 / (n + q + 1)), rel=1e-12)

    def test_n0(self):
        with pytest.raises(NoInteriorMinimizer, match="no interior minimizer"):
            optimal_window(1, 1, 0, 1, 0.1)

    @given(
        C=st.floats(1e-2, 1e2), E=st.floats(1e-2, 1e2), n=st.integers(1, 4), q=st.integers(0, 3),
        delta=st.floats(1e-6, 1e-1), delayed=st.booleans(),
    )
    def test_minimality_and_closed_form(self, C, E, n, q, delta, delayed):
        h = optimal_window(C, E, n, q, delta, delayed)
        value = psi(C, E, n, q, delta, h, delayed)
        assert value <= psi(C, E, n, q, delta, 0.9 * h, delayed)
        assert value <= psi(C, E, n, q, delta, 1.1 * h, delayed)
        assert value == pytest.approx(psi_minimum(C, E, n, q, delta, delayed), rel=1e-12)


class TestPsi:
    def test_examples(self):
        assert psi(0, 1, 1, 0, 0.1, 0.5) == pytest.approx(0.2)
        assert psi(1, 0, 1, 1, 0.1, 0.3) == pytest.approx(0.09)

    def test_positive_h(self):
        with pytest.raises(ValueError):
            psi(1, 1, 1, 0, 0.1, 0.0)


class TestRate:
    def test_examples(self):
        assert rate_exponent(1, 1) == pytest.approx(2 / 3)
        assert rate_exponent(0, 3) == 1.0
        assert rate_exponent(1, 1, delayed=True) == pytest.approx(3 / 4)

    @given(n=st.integers(1, 10), q=st.integers(0, 10))
    def test_delayed_faster(self, n, q):
        assert rate_exponent(n, q, True) > rate_exponent(n, q, False)


def test_bound_report():
    report = bound_report(EstimatorConfig(1, 1, LEGENDRE, 0.0), 10.0, 1e-3)
    assert report.h_star == pytest.approx(optimal_window(report.C_q, report.E_q, 1, 1, 1e-3))
    assert report.psi_at_h_star == pytest.approx(psi_minimum(report.C_q, report.E_q, 1, 1, 1e-3))
    assert report.rate_exponent == pytest.approx(2 / 3)
    delayed = bound_report(delayed_config(EstimatorConfig(1, 1, LEGENDRE)), 10.0, 1e-3, delayed=True)
    assert delayed.rate_exponent == pytest.approx(0.75)
    assert set(report.to_dict()) >= {"C_q", "E_q", "h_star", "psi_at_h_star", "rate_exponent"}
