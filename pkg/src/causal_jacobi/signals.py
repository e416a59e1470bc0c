"""Test signal, reproducible noise and error metrics.

The test signal is ``f(x) = exp(-x / 1.2) * sin(6 x + pi)`` sampled at
``Ts = 0.01`` on [0, 5]. Writing ``s = -1/1.2 + 6i`` gives
``f(x) = -Im(exp(s x))`` and therefore ``f^(k)(x) = -Im(s**k exp(s x))``
for every order k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .estimator import EstimateSeries, SampledSignal

DEFAULT_SAMPLES = 501
DEFAULT_TS = 0.01
DEFAULT_SNR_DB = 22.2
DEFAULT_SEED = 0

_S = complex(-1.0 / 1.2, 6.0)


def test_function(x, order: int = 0):
    """Order-``order`` derivative of the test signal."""
    x = np.asarray(x, dtype=float)
    value = -np.imag(_S**order * np.exp(_S * x))
    return value if value.ndim else float(value)


test_function.__test__ = False  # keep pytest from collecting the name


@dataclass(frozen=True)
class GroundTruth:
    """Analytic signal with derivatives of every order on ``interval``."""

    f: Callable
    derivative_fn: Callable
    interval: tuple[float, float] = (0.0, 5.0)

    def derivative(self, order: int) -> Callable:
        if order == 0:
            return self.f
        return lambda x: self.derivative_fn(x, order)

    def derivative_bound(self, order: int, points: int = 200_001) -> float:
        """``max |f^(order)|`` on the interval by dense sampling."""
        x = np.linspace(*self.interval, points)
        return float(np.max(np.abs(self.derivative(order)(x))))


def test_signal_truth(interval: tuple[float, float] = (0.0, 5.0)) -> GroundTruth:
    return GroundTruth(test_function, test_function, interval)


test_signal_truth.__test__ = False


def test_signal(n_samples: int = DEFAULT_SAMPLES, Ts: float = DEFAULT_TS) -> SampledSignal:
    """Clean samples of the test signal at ``x_i = Ts * i``."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    x = Ts * np.arange(n_samples)
    return SampledSignal(test_function(x), Ts)


test_signal.__test__ = False


def gaussian_sequence(seed: int, length: int) -> np.ndarray:
    """Standard normal draws, deterministic for a given seed on every platform.

    Uniforms come from the Philox4x64 counter-based generator, consumed in
    pairs ``(u1, u2)`` and mapped to two normals with the Box-Muller
    transform (cosine branch, then sine branch). Shorter sequences are
    prefixes of longer ones.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    pairs = (length + 1) // 2
    u = np.random.Generator(np.random.Philox(seed)).random(2 * pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))  # 1 - u is in (0, 1]
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:length]


def bounded_noise(seed: int, length: int, delta: float) -> np.ndarray:
    """Gaussian noise clipped at three sigma and rescaled so that ``|noise| <= delta``."""
    if not delta > 0:
        raise ValueError(f"noise level must be positive (got {delta})")
    return np.clip(gaussian_sequence(seed, length), -3.0, 3.0) * (delta / 3.0)


@dataclass(frozen=True)
class NoiseSpec:
    seed: int | None
    target_snr_db: float
    c: float

    @property
    def delta(self) -> float:
        """Noise level by the three-sigma rule."""
        return 3.0 * self.c


def snr_db(clean, noise) -> float:
    clean = np.asarray(clean, dtype=float)
    noise = np.asarray(noise, dtype=float)
    return float(10.0 * np.log10(np.sum(clean**2) / np.sum(noise**2)))


def calibrate_noise(clean: SampledSignal, raw_noise, target_snr_db: float, seed: int | None = None) -> NoiseSpec:
    """Scale ``c`` such that ``clean`` plus ``c * raw_noise`` has exactly the target SNR."""
    raw = np.asarray(raw_noise, dtype=float)
    if raw.shape != clean.samples.shape:
        raise ValueError("raw noise must have one value per sample")
    noise_power = np.sum(raw**2)
    if noise_power == 0.0:
        raise ValueError("raw noise is identically zero; SNR cannot be calibrated")
    c = np.sqrt(np.sum(clean.samples**2) / (10.0 ** (target_snr_db / 10.0) * noise_power))
    return NoiseSpec(seed, target_snr_db, float(c))


def noisy_signal(clean: SampledSignal, raw_noise, spec: NoiseSpec) -> SampledSignal:
    return SampledSignal(clean.samples + spec.c * np.asarray(raw_noise, dtype=float), clean.Ts, clean.t0)


def demo_record(
    snr: float = DEFAULT_SNR_DB, seed: int = DEFAULT_SEED, n_samples: int = DEFAULT_SAMPLES, Ts: float = DEFAULT_TS
) -> tuple[SampledSignal, SampledSignal, NoiseSpec]:
    """Clean record, noisy record and noise calibration of the reference experiment."""
    clean = test_signal(n_samples, Ts)
    raw = gaussian_sequence(seed, n_samples)
    spec = calibrate_noise(clean, raw, snr, seed)
    return clean, noisy_signal(clean, raw, spec), spec


@dataclass(frozen=True)
class ErrorMetrics:
    max_abs: float
    rms: float
    abscissae: np.ndarray
    residuals: np.ndarray


def error_metrics(estimates: EstimateSeries, truth: GroundTruth, compare_at_delay: bool = True) -> ErrorMetrics:
    """Residuals of an estimate series against the analytic derivative.

    With ``compare_at_delay`` the truth is taken at ``x - t_tau h``, the point
    the estimator actually targets; otherwise at the window edge ``x``.
    """
    x = estimates.delayed_times if compare_at_delay else estimates.times
    residuals = estimates.values - truth.derivative(estimates.config.n)(x)
    return ErrorMetrics(
        max_abs=float(np.max(np.abs(residuals))),
        rms=float(np.sqrt(np.mean(residuals**2))),
        abscissae=x,
        residuals=residuals,
    )
