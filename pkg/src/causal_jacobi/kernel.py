"""Causal Jacobi kernels and their discretization into FIR weights.

For derivative order ``n`` and truncation order ``q`` the kernel is

    Q(tau) = w(tau) * sum_{i=0..q} C_{n,i} P_i^{(alpha+n, beta+n)}(t_tau) P_{n+i}^{(alpha, beta)}(tau)

and the estimate of ``f^(n)(x - t_tau h)`` is
``(-h)**-n * integral_0^1 Q(tau) f(x - h tau) dtau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .jacobi import (
    MAX_DEGREE,
    JacobiParams,
    PolynomialCoeffs,
    eval_jacobi,
    jacobi_coeffs,
    log_gamma,
    polynomial_from_terms,
)
from .quadrature import dropped_endpoint_weights, product_trapezoid_weights


@dataclass(frozen=True)
class EstimatorConfig:
    n: int
    q: int
    params: JacobiParams
    t_tau: float = 0.0
    h: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"derivative order n must be non-negative (got {self.n})")
        if self.q < 0:
            raise ValueError(f"truncation order q must be non-negative (got {self.q})")
        if self.n + self.q > MAX_DEGREE:
            raise ValueError(f"n + q must not exceed {MAX_DEGREE} (got {self.n + self.q})")
        if not 0.0 <= self.t_tau <= 1.0:
            raise ValueError(f"t_tau must lie in [0, 1] (got {self.t_tau})")
        if not self.h > 0:
            raise ValueError(f"window length h must be positive (got {self.h})")

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def delay(self) -> float:
        """Time lag ``t_tau * h`` of the point actually estimated."""
        return self.t_tau * self.h

    def with_(self, **changes) -> "EstimatorConfig":
        return replace(self, **changes)


def kernel_coefficient(params: JacobiParams, n: int, i: int) -> float:
    """Scalar ``C_{alpha,beta,n,i}`` multiplying the i-th kernel term."""
    if n < 0 or i < 0:
        raise ValueError("n and i must be non-negative")
    a, b = params.alpha, params.beta
    if n + i == 0:
        # (a+b+1) Gamma(a+b+1) = Gamma(a+b+2); a+b+1 itself may be <= 0
        log_top = log_gamma(a + b + 2)
    else:
        log_top = math.log(a + b + 2 * n + 2 * i + 1) + log_gamma(a + b + 2 * n + i + 1)
    log_top += log_gamma(n + i + 1)
    return math.exp(log_top - log_gamma(b + n + i + 1) - log_gamma(a + n + i + 1))


def kernel_terms(config: EstimatorConfig) -> list[float]:
    """Per-term scalars ``C_{n,i} * P_i^{(alpha+n, beta+n)}(t_tau)`` for i = 0..q."""
    shifted = config.params.shifted(config.n)
    return [
        kernel_coefficient(config.params, config.n, i) * eval_jacobi(shifted, i, config.t_tau)
        for i in range(config.q + 1)
    ]


def kernel_polynomial(config: EstimatorConfig) -> PolynomialCoeffs:
    """The polynomial factor of Q (Q divided by the weight) in monomial form."""
    terms = kernel_terms(config)
    return polynomial_from_terms(
        [(c, jacobi_coeffs(config.params, config.n + i)) for i, c in enumerate(terms)]
    )


def _polynomial_factor(config: EstimatorConfig):
    terms = kernel_terms(config)
    degrees = [config.n + i for i in range(config.q + 1)]

    def factor(tau):
        # term-by-term sum keeps nested truncations comparable to rounding
        total = 0.0
        for c, d in zip(terms, degrees):
            total = total + c * eval_jacobi(config.params, d, tau)
        return total

    return factor


def kernel_function(config: EstimatorConfig):
    """Pointwise evaluator of Q on the open interval (0, 1)."""
    factor = _polynomial_factor(config)
    weight = config.params.weight

    def q_of_tau(tau):
        return weight(tau) * factor(tau)

    return q_of_tau


def min_subintervals(config: EstimatorConfig) -> int:
    return config.n + config.q + 2


@dataclass(frozen=True)
class DiscreteKernel:
    """FIR weights: ``estimate(x) = sum_j weights[j] * f(x - h j / m)``."""

    weights: np.ndarray
    m: int
    config: EstimatorConfig
    scheme: str = "corrected"

    def __post_init__(self):
        if len(self.weights) != self.m + 1:
            raise ValueError("need m + 1 weights")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("kernel weights must be finite")
        self.weights.setflags(write=False)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    @property
    def noise_gain(self) -> float:
        """``h**n * sum |weights|``, the discrete counterpart of the noise constant."""
        return float(np.sum(np.abs(self.weights)) * self.config.h**self.config.n)

    def apply_function(self, f, x: float) -> float:
        """Apply the kernel to a callable signal at abscissa ``x``."""
        samples = np.asarray(f(x - self.config.h * self.nodes), dtype=float)
        return float(np.dot(self.weights, samples))


def discretize(config: EstimatorConfig, m: int, scheme: str = "corrected") -> DiscreteKernel:
    """Discretize the estimator integral on the uniform grid ``tau_j = j / m``.

    ``scheme="corrected"`` integrates the kernel exactly against the
    piecewise-linear interpolant of the signal (finite for every alpha, beta
    and exact for affine signals). ``scheme="trapezoid"`` is the plain
    trapezoid rule on ``Q(tau) f(x - h tau)`` with a singular endpoint sample
    dropped.
    """
    if m < min_subintervals(config):
        raise ValueError(
            f"m={m} is too small: need at least n + q + 2 = {min_subintervals(config)} subintervals"
        )
    if scheme == "corrected":
        weights = np.zeros(m + 1)
        for i, c in enumerate(kernel_terms(config)):
            term = product_trapezoid_weights(m, config.params, jacobi_coeffs(config.params, config.n + i))
            weights = weights + c * term.weights
    elif scheme == "trapezoid":
        grid = dropped_endpoint_weights(m, config.params)
        weights = grid.weights * np.asarray(_polynomial_factor(config)(grid.nodes), dtype=float)
    else:
        raise ValueError(f"unknown quadrature scheme {scheme!r} (expected 'corrected' or 'trapezoid')")
    return DiscreteKernel(weights / (-config.h) ** config.n, m, config, scheme)
