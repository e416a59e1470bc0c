"""Quadrature on [0, 1]: an adaptive reference integrator and uniform grids.

Grids returned here integrate ``w(t) * g(t)`` for a smooth ``g`` sampled at
the uniform nodes ``j / m``. When the weight has a singular endpoint
(``alpha`` or ``beta`` in (-1, 0)) the plain trapezoid rule is undefined, so
:func:`product_trapezoid_weights` integrates the weight (times an optional
polynomial) exactly on each cell and only interpolates ``g``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .jacobi import JacobiParams


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must have the same length")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("quadrature weights must be finite")

    @property
    def m(self) -> int:
        return len(self.nodes) - 1

    def apply(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _quad(f, a, b, tol, weight=None, wvar=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(
            f, a, b, epsabs=tol, epsrel=0.0, limit=500, weight=weight, wvar=wvar, full_output=1
        )[:3]
    if err > tol:
        raise QuadratureError(
            f"adaptive quadrature on [{a}, {b}] did not converge: error estimate {err:.3g} > {tol:.3g}"
        )
    return value


def integrate_adaptive(f: Callable[[float], float], tol: float = 1e-10, breakpoints: Sequence[float] = ()) -> float:
    """Integrate ``f`` over (0, 1) to absolute tolerance ``tol``.

    Integrable algebraic endpoint singularities are handled by the
    extrapolating subdivision of QUADPACK's QAGS. ``breakpoints`` split the
    interval where ``f`` has kinks, e.g. at sign changes of an integrand
    passed through ``abs``.
    """
    edges = _edges(breakpoints)
    share = tol / (len(edges) - 1)
    return sum(_quad(f, a, b, share) for a, b in zip(edges[:-1], edges[1:]))


def integrate_weighted(
    g: Callable[[float], float], params: JacobiParams, tol: float = 1e-10, breakpoints: Sequence[float] = ()
) -> float:
    """Integrate ``w(t) * g(t)`` over (0, 1) for smooth (or piecewise smooth) ``g``.

    The pieces touching t=0 and t=1 carry the algebraic weight analytically
    (QUADPACK's QAWS), so no singular value is ever sampled.
    """
    a, b = params.alpha, params.beta
    edges = _edges(breakpoints)
    share = tol / (len(edges) - 1)
    if len(edges) == 2:
        return _quad(g, 0.0, 1.0, share, weight="alg", wvar=(b, a))
    total = _quad(lambda t: g(t) * (1.0 - t) ** a, 0.0, edges[1], share, weight="alg", wvar=(b, 0.0))
    for lo, hi in zip(edges[1:-2], edges[2:-1]):
        total += _quad(lambda t: g(t) * params.weight(t), lo, hi, share)
    total += _quad(lambda t: g(t) * t**b, edges[-2], 1.0, share, weight="alg", wvar=(0.0, a))
    return total


def _edges(breakpoints):
    inner = sorted(float(p) for p in breakpoints if 0.0 < p < 1.0)
    return [0.0, *inner, 1.0]


def trapezoid_weights(m: int) -> QuadratureGrid:
    if m < 2:
        raise ValueError(f"need at least 2 subintervals (got m={m})")
    nodes = np.arange(m + 1) / m
    weights = np.full(m + 1, 1.0 / m)
    weights[[0, -1]] = 0.5 / m
    return QuadratureGrid(nodes, weights)


def _cell_moments(params: JacobiParams, nodes: np.ndarray, kmax: int) -> np.ndarray:
    """``mu[k, c]`` = integral of ``t**k w(t)`` over cell ``c``, for k = 0..kmax."""
    a, b = params.alpha, params.beta
    k = np.arange(kmax + 1)[:, None]
    cumulative = special.beta(b + 1 + k, a + 1) * special.betainc(b + 1 + k, a + 1, nodes[None, :])
    return np.diff(cumulative, axis=1)


def product_trapezoid_weights(m: int, params: JacobiParams, poly=None) -> QuadratureGrid:
    """Weights for ``integral of w(t) p(t) g(t) dt`` with ``g`` sampled at ``j / m``.

    ``g`` is replaced by its piecewise-linear interpolant while ``w * p`` is
    integrated exactly on every cell (incomplete Beta moments), so all weights
    are finite for ``alpha, beta > -1`` and the rule is exact for affine ``g``.
    ``poly`` is a :class:`PolynomialCoeffs`; ``None`` means ``p = 1``.
    """
    if m < 2:
        raise ValueError(f"need at least 2 subintervals (got m={m})")
    coeffs = np.array([1.0]) if poly is None else np.asarray(poly.coeffs)
    nodes = np.arange(m + 1) / m
    mu = _cell_moments(params, nodes, len(coeffs))
    mass = coeffs @ mu[:-1]  # integral of w p over each cell
    first = coeffs @ mu[1:]  # integral of t w p over each cell
    left, right = nodes[:-1], nodes[1:]
    # hat functions: (right - t) m on the left node, (t - left) m on the right node
    weights = np.zeros(m + 1)
    weights[:-1] += (right * mass - first) * m
    weights[1:] += (first - left * mass) * m
    return QuadratureGrid(nodes, weights)


def endpoint_corrected_weights(m: int, params: JacobiParams) -> QuadratureGrid:
    """Product trapezoid rule for ``integral of w(t) g(t) dt`` on nodes ``j / m``.

    For ``alpha = beta = 0`` this is the plain trapezoid rule.
    """
    return product_trapezoid_weights(m, params)


def dropped_endpoint_weights(m: int, params: JacobiParams) -> QuadratureGrid:
    """Plain trapezoid rule on ``w(t) g(t)``, with a singular endpoint node given weight 0.

    Compatibility path mimicking a naive discretization of the weighted
    integral; finite, but only first-order accurate near a singular end.
    """
    grid = trapezoid_weights(m)
    w = np.zeros(m + 1)
    interior = slice(1, m)
    w[interior] = params.weight(grid.nodes[interior])
    # endpoint weight values: 0**p is 0 for p > 0, 1 for p == 0, infinite (dropped) for p < 0
    w[0] = 1.0 if params.beta == 0 else 0.0
    w[-1] = 1.0 if params.alpha == 0 else 0.0
    return QuadratureGrid(grid.nodes, grid.weights * w)
