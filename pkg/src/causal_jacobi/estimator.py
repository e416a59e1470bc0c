"""Sliding-window causal derivative estimates on uniformly sampled signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jacobi import smallest_root
from .kernel import DiscreteKernel, EstimatorConfig, discretize, min_subintervals


@dataclass(frozen=True)
class SampledSignal:
    samples: np.ndarray
    Ts: float
    t0: float = 0.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1 or len(samples) < 2:
            raise ValueError("a signal needs at least 2 samples")
        if not self.Ts > 0:
            raise ValueError(f"sampling period must be positive (got {self.Ts})")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.Ts * np.arange(len(self.samples))


@dataclass(frozen=True)
class EstimateSeries:
    times: np.ndarray
    values: np.ndarray
    delay: float
    config: EstimatorConfig

    def __len__(self) -> int:
        return len(self.values)

    @property
    def delayed_times(self) -> np.ndarray:
        """Abscissae ``x - t_tau h`` the estimates actually refer to."""
        return self.times - self.delay


def window_subintervals(h: float, Ts: float, rtol: float = 1e-9) -> int:
    """Number of samples periods in a window of length ``h``; ``h`` must be a multiple of ``Ts``."""
    m = int(round(h / Ts))
    if m < 1 or abs(m * Ts - h) > rtol * h:
        nearest = max(m, 1) * Ts
        raise ValueError(
            f"window length h={h!r} is not an integer multiple of Ts={Ts!r}; nearest valid h is {nearest!r}"
        )
    return m


def _check_alignment(signal: SampledSignal, kernel: DiscreteKernel) -> None:
    h = kernel.config.h
    if abs(kernel.m * signal.Ts - h) > 1e-9 * h:
        raise ValueError(
            f"kernel nodes do not coincide with samples: m*Ts = {kernel.m * signal.Ts!r} but h = {h!r}"
        )


def _apply(samples: np.ndarray, weights: np.ndarray, indices: np.ndarray) -> np.ndarray:
    # fixed summation order over j so single-point and batch paths agree bitwise
    acc = np.zeros(len(indices))
    for j, w in enumerate(weights):
        acc = acc + w * samples[indices - j]
    return acc


def estimate_at(signal: SampledSignal, kernel: DiscreteKernel, index: int) -> float:
    """Estimate of ``f^(n)(x - t_tau h)`` with ``x`` the time of sample ``index``.

    Uses samples ``index - m .. index`` only.
    """
    _check_alignment(signal, kernel)
    if index < kernel.m or index >= len(signal):
        raise IndexError(
            f"window for sample {index} is out of range: need {kernel.m} <= index < {len(signal)}"
        )
    return float(_apply(signal.samples, kernel.weights, np.array([index]))[0])


def estimate_series(signal: SampledSignal, config: EstimatorConfig, scheme: str = "corrected") -> EstimateSeries:
    """Estimates at every sample whose backward window lies inside the record."""
    m = window_subintervals(config.h, signal.Ts)
    if m < min_subintervals(config):
        raise ValueError(
            f"h={config.h} spans only {m} sample periods; need at least n + q + 2 = {min_subintervals(config)}"
        )
    if m >= len(signal):
        raise ValueError(
            f"window h={config.h} is longer than the record ({(len(signal) - 1) * signal.Ts}); no estimates possible"
        )
    kernel = discretize(config, m, scheme)
    return apply_kernel(signal, kernel)


def apply_kernel(signal: SampledSignal, kernel: DiscreteKernel) -> EstimateSeries:
    _check_alignment(signal, kernel)
    indices = np.arange(kernel.m, len(signal))
    if len(indices) == 0:
        raise ValueError("signal is shorter than the kernel window")
    values = _apply(signal.samples, kernel.weights, indices)
    return EstimateSeries(signal.times[indices], values, kernel.config.delay, kernel.config)


def delayed_config(config: EstimatorConfig) -> EstimatorConfig:
    """Same estimator evaluated at the smallest root of ``P_{q+1}^{(alpha+n, beta+n)}``."""
    theta = smallest_root(config.params.shifted(config.n), config.q + 1)
    return config.with_(t_tau=theta)
