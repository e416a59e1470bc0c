import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from causal_jacobi.estimator import EstimateSeries, delayed_config, estimate_series
from causal_jacobi.jacobi import JacobiParams
from causal_jacobi.kernel import EstimatorConfig
from causal_jacobi.signals import (
    bounded_noise,
    calibrate_noise,
    demo_record,
    error_metrics,
    gaussian_sequence,
    noisy_signal,
    snr_db,
    test_function,
    test_signal,
    test_signal_truth,
)


class TestSignal:
    def test_origin(self):
        assert test_signal().samples[0] == pytest.approx(0.0, abs=1e-15)

    def test_default_record(self):
        s = test_signal()
        assert len(s) == 501
        assert s.times[-1] == pytest.approx(5.0)

    def test_value_at_one(self):
        # samples[100] is x = 1
        assert test_signal().samples[100] == pytest.approx(math.exp(-1 / 1.2) * math.sin(6 + math.pi), rel=1e-12)

    def test_first_derivative_closed_form(self):
        x = np.linspace(0, 5, 37)
        closed = np.exp(-x / 1.2) * (6 * np.cos(6 * x + np.pi) - np.sin(6 * x + np.pi) / 1.2)
        assert_allclose(test_function(x, 1), closed, rtol=1e-12, atol=1e-13)

    @pytest.mark.parametrize("order", range(1, 6))
    def test_derivatives_match_finite_differences(self, order):
        x = np.linspace(0.1, 4.9, 100)
        step = 1e-4
        fd = (test_function(x + step, order - 1) - test_function(x - step, order - 1)) / (2 * step)
        exact = test_function(x, order)
        scale = np.max(np.abs(exact))
        assert np.max(np.abs(fd - exact)) <= 1e-6 * scale

    def test_sampled_derivative_is_second_order(self):
        s = test_signal()
        fd = (s.samples[2:] - s.samples[:-2]) / (2 * s.Ts)
        err = np.max(np.abs(fd - test_function(s.times[1:-1], 1)))
        bound = np.max(np.abs(test_function(s.times, 3))) * s.Ts**2 / 6
        assert err <= bound * 1.01

    def test_derivative_bound(self):
        truth = test_signal_truth()
        # |f^(k)| <= |s|^k with a maximum close to x = 0
        s = abs(complex(-1 / 1.2, 6))
        for k in (1, 2, 3):
            M = truth.derivative_bound(k)
            assert 0.8 * s**k < M <= s**k


class TestGaussian:
    def test_deterministic(self):
        assert_array_equal(gaussian_sequence(7, 1000), gaussian_sequence(7, 1000))
        assert not np.array_equal(gaussian_sequence(7, 1000), gaussian_sequence(8, 1000))

    def test_prefix_stable(self):
        assert_array_equal(gaussian_sequence(0, 10), gaussian_sequence(0, 11)[:10])

    def test_moments(self):
        z = gaussian_sequence(0, 10**6)
        assert -0.005 < z.mean() < 0.005
        assert 0.995 < z.var() < 1.005

    def test_frozen_values(self):
        # regression anchor for the documented Philox + Box-Muller stream
        expected = [-0.008211587544399778, 0.16812613774348753, 0.9481955881183344, 0.6136754112581602]
        assert_allclose(gaussian_sequence(0, 4), expected, rtol=1e-15)

    def test_box_muller_of_philox(self):
        u = np.random.Generator(np.random.Philox(5)).random(6)
        r = np.sqrt(-2 * np.log(1 - u[0::2]))
        z = np.empty(6)
        z[0::2], z[1::2] = r * np.cos(2 * np.pi * u[1::2]), r * np.sin(2 * np.pi * u[1::2])
        assert_allclose(gaussian_sequence(5, 5), z[:5], rtol=1e-13)

    def test_bounded(self):
        noise = bounded_noise(3, 5000, 0.2)
        assert np.max(np.abs(noise)) <= 0.2
        assert np.max(np.abs(noise)) > 0.19


class TestCalibration:
    def test_scale_invariance(self):
        clean = test_signal()
        raw = gaussian_sequence(0, 501)
        a = calibrate_noise(clean, raw, 22.2)
        b = calibrate_noise(clean, 2 * raw, 22.2)
        assert b.c == pytest.approx(a.c / 2, rel=1e-14)
        assert_allclose(b.c * 2 * raw, a.c * raw, rtol=1e-14)

    def test_realized_snr(self):
        clean, noisy, spec = demo_record()
        assert snr_db(clean.samples, noisy.samples - clean.samples) == pytest.approx(22.2, abs=1e-9)
        assert spec.delta == 3 * spec.c

    def test_three_sigma_fraction(self):
        clean, noisy, spec = demo_record()
        noise = noisy.samples - clean.samples
        assert np.mean(np.abs(noise) > spec.delta) <= 0.01

    def test_zero_noise(self):
        with pytest.raises(ValueError, match="zero"):
            calibrate_noise(test_signal(), np.zeros(501), 20)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            calibrate_noise(test_signal(), np.ones(10), 20)

    def test_noisy_signal(self):
        clean = test_signal(10)
        spec = calibrate_noise(clean, np.ones(10), 10.0)
        assert_allclose(noisy_signal(clean, np.ones(10), spec).samples - clean.samples, spec.c)


class TestMetrics:
    def test_perfect(self):
        truth = test_signal_truth()
        config = EstimatorConfig(1, 0, JacobiParams(0, 0), 0.25, 0.4)
        x = np.linspace(0.4, 5, 50)
        series = EstimateSeries(x, test_function(x - 0.1, 1), 0.1, config)
        m = error_metrics(series, truth, compare_at_delay=True)
        assert m.max_abs == pytest.approx(0, abs=1e-15) and m.rms == pytest.approx(0, abs=1e-15)
        assert len(m.residuals) == len(series)

    def test_delay_aware_comparison_is_better(self):
        _, noisy, _ = demo_record()
        truth = test_signal_truth()
        series = estimate_series(noisy, delayed_config(EstimatorConfig(1, 1, JacobiParams(0, 0), 0.0, 0.4)))
        assert error_metrics(series, truth, True).rms < error_metrics(series, truth, False).rms
