"""Convergence-rate experiments: error at the bound-optimal window versus noise level.

At each noise level ``delta`` the window is set to the minimizer of the error
bound, the test signal is corrupted by noise bounded by ``delta`` and the
sup-error of the estimator is recorded. A least-squares fit of
``log(error)`` against ``log(delta)`` is compared with the predicted exponent.

Noise model: a continuous piecewise-linear function whose knot values are
Gaussian draws clipped at three sigma and rescaled to ``delta``, with
``noise_knots`` knots per window. Tying the knot spacing to the window keeps
the noise's correlation with the kernel independent of ``h``, so the measured
error follows the worst-case scaling of the bound. The estimator integral is
discretized with ``dense_m`` samples per window, finer than the knots.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .estimator import SampledSignal, delayed_config, estimate_series
from .jacobi import JacobiParams
from .kernel import EstimatorConfig
from .signals import GroundTruth, bounded_noise, error_metrics
from .tuning import bound_constants, delayed_bound_constants, optimal_window, psi, rate_exponent

SLOPE_RTOL = 0.15


@dataclass(frozen=True)
class SweepPlan:
    n: int
    q: int
    params: JacobiParams = field(default_factory=lambda: JacobiParams(0.0, 0.0))
    delayed: bool = False
    deltas: tuple[float, ...] = tuple(np.logspace(-4, -1, 6))
    trials: int = 3
    M: float | None = None
    dense_m: int = 100
    noise_knots: int = 20

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if self.n < 1:
            raise ValueError("rate sweeps need derivative order n >= 1")
        if len(self.deltas) < 4:
            raise ValueError(f"the noise ladder needs at least 4 levels (got {len(self.deltas)})")
        if any(not d > 0 for d in self.deltas):
            raise ValueError("noise levels must be positive (log of zero is undefined)")
        if max(self.deltas) / min(self.deltas) < 100.0 * (1 - 1e-12):
            raise ValueError("the noise ladder must span at least two decades")
        if self.trials < 3:
            raise ValueError(f"need at least 3 trials per level (got {self.trials})")
        if self.dense_m < self.n + self.q + 2:
            raise ValueError("dense_m must be at least n + q + 2")
        if self.noise_knots < 1:
            raise ValueError("noise_knots must be positive")

    def config(self) -> EstimatorConfig:
        config = EstimatorConfig(self.n, self.q, self.params)
        return delayed_config(config) if self.delayed else config

    @property
    def bound_order(self) -> int:
        """Derivative order bounded by ``M``."""
        return self.n + self.q + (2 if self.delayed else 1)


@dataclass(frozen=True)
class LevelResult:
    delta: float
    h_used: float
    m: int
    psi: float
    errors: tuple[float, ...]

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors))

    @property
    def spread(self) -> float:
        return float(np.std(self.errors))


@dataclass(frozen=True)
class SweepResult:
    plan: SweepPlan
    C_q: float
    E_q: float
    M: float
    levels: tuple[LevelResult, ...]
    slope: float
    intercept: float
    theoretical_exponent: float

    @property
    def relative_slope_error(self) -> float:
        return abs(self.slope - self.theoretical_exponent) / self.theoretical_exponent

    @property
    def passed(self) -> bool:
        return self.relative_slope_error <= SLOPE_RTOL

    def to_dict(self) -> dict:
        plan = asdict(self.plan)
        return {
            "plan": plan,
            "C_q": self.C_q,
            "E_q": self.E_q,
            "M": self.M,
            "t_tau": self.plan.config().t_tau,
            "levels": [
                {**asdict(lv), "errors": list(lv.errors), "mean_error": lv.mean_error, "spread": lv.spread}
                for lv in self.levels
            ],
            "slope": self.slope,
            "intercept": self.intercept,
            "theoretical_exponent": self.theoretical_exponent,
            "relative_slope_error": self.relative_slope_error,
            "pass": self.passed,
        }


def function_noise(seed, grid: np.ndarray, spacing: float, delta: float) -> np.ndarray:
    """Values on ``grid`` of a piecewise-linear noise function bounded by ``delta``.

    Knots sit at multiples of ``spacing`` starting from ``grid[0]``.
    """
    span = grid[-1] - grid[0]
    n_knots = int(math.ceil(span / spacing)) + 2
    knots = grid[0] + spacing * np.arange(n_knots)
    return np.interp(grid, knots, bounded_noise(seed, n_knots, delta))


def measure_sup_error(
    config: EstimatorConfig,
    truth: GroundTruth,
    delta: float,
    seed,
    dense_m: int = 100,
    noise_knots: int = 20,
) -> float:
    """Sup over the admissible range of ``|estimate - f^(n)(x - t_tau h)|``.

    The test signal plus bounded function noise is sampled with ``dense_m``
    points per window of length ``config.h`` over ``truth.interval``.
    """
    lo, hi = truth.interval
    Ts = config.h / dense_m
    count = int(math.floor((hi - lo) / Ts + 1e-9)) + 1
    x = lo + Ts * np.arange(count)
    samples = truth.f(x)
    if delta > 0:
        samples = samples + function_noise(seed, x, config.h / noise_knots, delta)
    series = estimate_series(SampledSignal(samples, Ts, lo), config)
    return error_metrics(series, truth, compare_at_delay=True).max_abs


def run_sweep(plan: SweepPlan, truth: GroundTruth, seed: int = 0) -> SweepResult:
    base = plan.config()
    M = plan.M if plan.M is not None else truth.derivative_bound(plan.bound_order)
    if plan.delayed:
        C, E = delayed_bound_constants(base, M)
    else:
        C, E = bound_constants(base, M)
    record = truth.interval[1] - truth.interval[0]

    levels = []
    for k, delta in enumerate(plan.deltas):
        h = optimal_window(C, E, plan.n, plan.q, delta, plan.delayed)
        if h >= record:
            raise ValueError(
                f"optimal window h*={h:.4g} at delta={delta:.3g} exceeds the record length {record:.4g}; "
                "use a longer record or smaller noise levels"
            )
        config = base.with_(h=h)
        errors = tuple(
            measure_sup_error(config, truth, delta, (seed, k, trial), plan.dense_m, plan.noise_knots)
            for trial in range(plan.trials)
        )
        levels.append(
            LevelResult(delta, h, plan.dense_m, psi(C, E, plan.n, plan.q, delta, h, plan.delayed), errors)
        )

    log_d = np.log([lv.delta for lv in levels])
    log_e = np.log([lv.mean_error for lv in levels])
    slope, intercept = np.polyfit(log_d, log_e, 1)
    return SweepResult(
        plan=plan,
        C_q=C,
        E_q=E,
        M=M,
        levels=tuple(levels),
        slope=float(slope),
        intercept=float(intercept),
        theoretical_exponent=rate_exponent(plan.n, plan.q, plan.delayed),
    )
