"""Shifted Jacobi polynomials on [0, 1].

The polynomials are orthogonal under the weight ``(1 - t)**alpha * t**beta``
and are evaluated from their explicit binomial sum, not the three-term
recurrence. Degrees are small (at most :data:`MAX_DEGREE`) so the monomial
form is accurate enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

MAX_DEGREE = 12


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the weight ``w(t) = (1 - t)**alpha * t**beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= -1.0:
                raise ValueError(f"{name} must exceed -1 (got {value!r})")

    def shifted(self, k: int) -> "JacobiParams":
        """Parameters ``(alpha + k, beta + k)``."""
        return JacobiParams(self.alpha + k, self.beta + k)

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 - t) ** self.alpha * t**self.beta


@dataclass(frozen=True)
class PolynomialCoeffs:
    """Monomial coefficients ``c_0 .. c_d`` (lowest degree first)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) > 1 and self.coeffs[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        acc = np.full_like(t, self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc if acc.ndim else float(acc)

    def deriv(self, k: int = 1) -> "PolynomialCoeffs":
        c = list(self.coeffs)
        for _ in range(k):
            if len(c) == 1:
                return PolynomialCoeffs((0.0,))
            c = [j * c[j] for j in range(1, len(c))]
        return PolynomialCoeffs(c)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma is only defined here for x > 0 (got {x!r})")
    return math.lgamma(x)


def _binom(a: float, j: int) -> float:
    # generalized binomial (a choose j) for a > j - 1
    return math.exp(log_gamma(a + 1) - log_gamma(j + 1) - log_gamma(a - j + 1))


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"degree must be non-negative (got {n})")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds supported maximum {MAX_DEGREE}")


def eval_jacobi(params: JacobiParams, n: int, t):
    """Evaluate ``P_n^{(alpha, beta)}`` at ``t`` (scalar or array)."""
    _check_degree(n)
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for j in range(n + 1):
        a_j = _binom(n + params.alpha, j) * _binom(n + params.beta, n - j)
        total = total + a_j * (t - 1.0) ** (n - j) * t**j
    return total if total.ndim else float(total)


def jacobi_coeffs(params: JacobiParams, n: int) -> PolynomialCoeffs:
    """Monomial expansion of ``P_n^{(alpha, beta)}``."""
    _check_degree(n)
    c = [0.0] * (n + 1)
    for j in range(n + 1):
        a_j = _binom(n + params.alpha, j) * _binom(n + params.beta, n - j)
        # (t - 1)^(n-j) t^j = sum_k C(n-j, k-j) (-1)^(n-k) t^k
        for k in range(j, n + 1):
            c[k] += a_j * math.comb(n - j, k - j) * (-1.0) ** (n - k)
    return PolynomialCoeffs(c)


def jacobi_norm_sq(params: JacobiParams, n: int) -> float:
    """Squared weighted norm of ``P_n^{(alpha, beta)}`` on [0, 1]."""
    _check_degree(n)
    a, b = params.alpha, params.beta
    if n == 0:
        # (a+b+1) Gamma(a+b+1) folded into Gamma(a+b+2); a+b+1 may be negative
        return math.exp(log_gamma(a + 1) + log_gamma(b + 1) - log_gamma(a + b + 2))
    log_ratio = (
        log_gamma(a + n + 1)
        + log_gamma(b + n + 1)
        - log_gamma(a + b + n + 1)
        - log_gamma(n + 1)
    )
    return math.exp(log_ratio) / (2 * n + a + b + 1)


def unit_interval_roots(poly, n_scan: int) -> list[float]:
    """Sign-change roots of ``poly`` in (0, 1), scanned then refined.

    ``poly`` is any vectorized callable. Roots that do not change sign
    (even multiplicity) are not reported.
    """
    # roots crowd the endpoints as alpha or beta approach -1: cluster the scan there
    uniform = np.sin(0.5 * np.pi * np.linspace(0.0, 1.0, n_scan + 1)) ** 2
    tail = np.geomspace(1e-14, 1e-2, 48)
    grid = np.unique(np.concatenate([uniform, tail, 1.0 - tail]))
    values = np.asarray(poly(grid), dtype=float)
    roots = []
    for k in range(len(grid) - 1):
        lo, hi = values[k], values[k + 1]
        if lo == 0.0:
            if 0.0 < grid[k] < 1.0:
                roots.append(float(grid[k]))
        elif lo * hi < 0.0:
            roots.append(
                brentq(lambda s: float(poly(s)), grid[k], grid[k + 1], xtol=1e-15, rtol=1e-15)
            )
    return roots


def all_roots(params: JacobiParams, n: int) -> list[float]:
    """All ``n`` roots of ``P_n^{(alpha, beta)}``, ascending."""
    if n < 1:
        raise ValueError("degree must be at least 1 to have roots")
    roots = unit_interval_roots(lambda s: eval_jacobi(params, n, s), 64 * n)
    if len(roots) != n:
        raise RuntimeError(
            f"located {len(roots)} roots of P_{n}^({params.alpha}, {params.beta}) "
            f"in (0, 1), expected {n}"
        )
    return roots


def smallest_root(params: JacobiParams, n: int) -> float:
    """Smallest root in (0, 1) of ``P_n^{(alpha, beta)}``."""
    return all_roots(params, n)[0]


def polynomial_from_terms(terms: Sequence[tuple[float, PolynomialCoeffs]]) -> PolynomialCoeffs:
    """Collapse ``sum_k scale_k * poly_k`` into one monomial polynomial."""
    size = max(p.degree for _, p in terms) + 1
    c = np.zeros(size)
    for scale, p in terms:
        c[: p.degree + 1] += scale * np.asarray(p.coeffs)
    nz = np.flatnonzero(c)
    top = nz[-1] + 1 if len(nz) else 1
    return PolynomialCoeffs(c[:top])
