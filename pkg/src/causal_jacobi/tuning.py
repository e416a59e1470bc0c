"""Error-bound constants and the bound-optimal window length.

For a kernel with derivative order ``n`` and truncation ``q`` the sup-error
with noise level ``delta`` obeys

    psi(h) = C * h**(q+1) + E * delta / h**n

with ``E = integral |Q|`` and ``C = M (integral |u**(n+q+1) Q| / (n+q+1)! + t_tau**(q+1) / (q+1)!)``.
When ``t_tau`` is the smallest root of ``P_{q+1}^{(alpha+n, beta+n)}`` the
bias order rises by one (``delayed=True`` throughout this module).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .jacobi import smallest_root, unit_interval_roots
from .kernel import EstimatorConfig, kernel_polynomial
from .quadrature import integrate_weighted


class NoInteriorMinimizer(ValueError):
    """Raised when psi(h) is monotone in h (derivative order 0)."""


@dataclass(frozen=True)
class BoundReport:
    C_q: float
    E_q: float
    M: float
    h_star: float
    psi_at_h_star: float
    rate_exponent: float
    delayed: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _bias_order(q: int, delayed: bool) -> int:
    return q + 2 if delayed else q + 1


def _abs_integrals(config: EstimatorConfig, power: int, tol: float) -> tuple[float, float]:
    """``integral |Q|`` and ``integral |u**power Q|``, split at sign changes of Q."""
    poly = kernel_polynomial(config)
    breaks = unit_interval_roots(poly, 64 * max(poly.degree, 1))
    e = integrate_weighted(lambda u: abs(poly(u)), config.params, tol, breaks)
    c = integrate_weighted(lambda u: abs(u**power * poly(u)), config.params, tol, breaks)
    return e, c


def bound_constants(config: EstimatorConfig, M: float, tol: float = 1e-10) -> tuple[float, float]:
    """Bias constant ``C`` and noise gain ``E`` for a delay-free bound.

    ``M`` bounds ``|f^(n+q+1)|`` on the interval of interest.
    """
    if M < 0:
        raise ValueError(f"derivative bound M must be non-negative (got {M})")
    k = config.n + config.q + 1
    e, moment = _abs_integrals(config, k, tol)
    c = M * (moment / math.factorial(k) + config.t_tau ** (config.q + 1) / math.factorial(config.q + 1))
    return c, e


def delayed_bound_constants(config: EstimatorConfig, M_next: float, tol: float = 1e-10) -> tuple[float, float]:
    """Constants of the raised-order bound at ``t_tau = theta_{q+1}``.

    ``M_next`` bounds ``|f^(n+q+2)|``.
    """
    if M_next < 0:
        raise ValueError(f"derivative bound must be non-negative (got {M_next})")
    theta = smallest_root(config.params.shifted(config.n), config.q + 1)
    if abs(config.t_tau - theta) > 1e-9:
        raise ValueError(
            f"t_tau={config.t_tau!r} is not the smallest root theta_{config.q + 1}={theta!r}; "
            "use delayed_config() first"
        )
    k = config.n + config.q + 2
    e, moment = _abs_integrals(config, k, tol)
    c = M_next * (moment / math.factorial(k) + theta ** (config.q + 2) / math.factorial(config.q + 2))
    return c, e


def psi(C_q: float, E_q: float, n: int, q: int, delta: float, h: float, delayed: bool = False) -> float:
    """Total error bound at window length ``h``."""
    if not h > 0:
        raise ValueError(f"h must be positive (got {h})")
    return C_q * h ** _bias_order(q, delayed) + E_q * delta / h**n


def optimal_window(C_q: float, E_q: float, n: int, q: int, delta: float, delayed: bool = False) -> float:
    """Minimizer of :func:`psi` over h > 0."""
    if n == 0:
        raise NoInteriorMinimizer("no interior minimizer: for n = 0 the bound increases with h")
    if not (C_q > 0 and E_q > 0 and delta > 0):
        raise ValueError("C_q, E_q and delta must all be positive")
    p = _bias_order(q, delayed)
    return (n * E_q * delta / (p * C_q)) ** (1.0 / (n + p))


def psi_minimum(C_q: float, E_q: float, n: int, q: int, delta: float, delayed: bool = False) -> float:
    """Closed-form value of psi at the optimal window."""
    if n == 0:
        raise NoInteriorMinimizer("no interior minimizer: for n = 0 the bound increases with h")
    p = _bias_order(q, delayed)
    s = n + p
    return (s / p) * (p / n) ** (n / s) * C_q ** (n / s) * E_q ** (p / s) * delta ** (p / s)


def rate_exponent(n: int, q: int, delayed: bool = False) -> float:
    """Exponent of delta in the error at the optimal window."""
    if n < 0 or q < 0:
        raise ValueError("n and q must be non-negative")
    p = _bias_order(q, delayed)
    return p / (n + p)


def bound_report(config: EstimatorConfig, M: float, delta: float, delayed: bool = False) -> BoundReport:
    """Constants, optimal window and minimal bound in one bundle.

    With ``delayed`` the configuration must already sit at ``theta_{q+1}``
    and ``M`` bounds ``|f^(n+q+2)|``.
    """
    if delayed:
        c, e = delayed_bound_constants(config, M)
    else:
        c, e = bound_constants(config, M)
    h_star = optimal_window(c, e, config.n, config.q, delta, delayed)
    return BoundReport(
        C_q=c,
        E_q=e,
        M=M,
        h_star=h_star,
        psi_at_h_star=psi(c, e, config.n, config.q, delta, h_star, delayed),
        rate_exponent=rate_exponent(config.n, config.q, delayed),
        delayed=delayed,
    )
