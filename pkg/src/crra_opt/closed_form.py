"""Closed-form power-utility weights under a log-normal gross-return proxy.

For excess returns ``R ~ N(mu, sigma)`` the gross portfolio return
``R_f + w'R`` is normal; replacing it by the matched log-normal
``logN(ln(R_f + w'mu), w'sigma w / (R_f + w'mu)^2)`` makes the expected
power utility available in closed form.  Maximizing it reduces to the
scalar quadratic first-order condition

    (R_f + c J)^2 + (1 - gamma) c R_f = 0,      J = mu' sigma^-1 mu,

whose admissible solution exists for ``gamma >= 1 + 4 J`` and yields
weights ``w* = c sigma^-1 mu``.  This module implements that solution and
its companion quantities: the reduced objective ``G``, the approximate
expected utility, the frontier point of ``w*`` and the fully-risky
(tangency) portfolio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateMu,
    DimensionMismatch,
    GammaBelowBound,
    NonPositiveGrossMean,
    SingularDenominator,
)
from .market import MarketParams, RiskAversion, gamma_lower_bound

# Tolerances; callers may override via keyword arguments.
BOUND_TOL = 1e-12   # slack when testing gamma against 1 + 4J
D_CLAMP = 1e-14     # discriminant values in (-D_CLAMP, 0) are treated as 0
J_MIN = 1e-14       # below this, mu is considered degenerate


@dataclass(frozen=True)
class ClosedFormSolution:
    """Closed-form weights ``c * sigma^-1 mu`` plus diagnostics.

    ``foc_residual`` is ``(R_f + cJ)^2 + (1-gamma) c R_f`` evaluated at the
    returned scale; it is zero up to rounding for any valid solution.
    """

    weights: np.ndarray
    c: float
    J: float
    D: float
    gamma: float
    expected_excess_return: float
    variance: float
    foc_residual: float


@dataclass(frozen=True)
class TangencyResult:
    """Fully-risky portfolio (weights sum to one) and the risk aversion
    at which the closed-form solution holds it."""

    weights: np.ndarray
    gamma_tgc: float


def _scale_roots(J: float, gamma: float, gross_rf: float, d_clamp: float = D_CLAMP):
    """Both roots of the first-order condition, in cancellation-free form.

    The quadratic ``J^2 c^2 + (2 R_f J + (1-gamma) R_f) c + R_f^2 = 0`` has
    roots ``c_± = R_f (a - J ± sqrt(D)) / J^2`` with ``a = (gamma-1)/2`` and
    ``D = a^2 - (gamma-1) J``.  The minus root is rewritten through the root
    product ``c_+ c_- = R_f^2 / J^2`` as ``R_f / (a - J + sqrt(D))``, which
    avoids the catastrophic cancellation of the textbook form when J is
    small.

    ``|D| < d_clamp`` is treated as an exact double root: when gamma sits at
    the bound up to float rounding, D carries only rounding noise (~1e-18)
    whose square root would otherwise contaminate c at ~1e-8 relative.
    """
    a = (gamma - 1.0) / 2.0
    d = a * a - (gamma - 1.0) * J
    if -d_clamp < d < d_clamp:
        d = 0.0
    root = math.sqrt(d)
    c_minus = gross_rf / (a - J + root)
    c_plus = gross_rf * (a - J + root) / (J * J)
    return c_minus, c_plus, d


def solve_analytical(
    p: MarketParams,
    ra: RiskAversion,
    *,
    bound_tol: float = BOUND_TOL,
    j_min: float = J_MIN,
) -> ClosedFormSolution:
    """Closed-form optimal weights for ``gamma >= 1 + 4J``.

    Selects the smaller root of the first-order condition, which carries the
    higher value of the reduced objective ``G`` whenever both roots are
    admissible.  Equality ``gamma = 1 + 4J`` is accepted (double root, D=0).

    Raises
    ------
    GammaBelowBound
        If ``gamma < 1 + 4J`` beyond ``bound_tol``; carries the bound.
    DegenerateMu
        If ``J <= j_min`` (the weight scale divides by J).
    """
    sol = p.solve_sigma(p.mu)
    J = float(p.mu @ sol)
    if J <= j_min:
        raise DegenerateMu(f"mu' sigma^-1 mu = {J:.3e} is numerically zero")
    bound = 1.0 + 4.0 * J
    gamma = ra.gamma
    if gamma < bound - bound_tol:
        raise GammaBelowBound(gamma, bound)
    c, _, d = _scale_roots(J, gamma, p.gross_rf)
    weights = c * sol
    mean = float(weights @ p.mu)
    variance = float(weights @ p.sigma @ weights)
    foc = (p.gross_rf + c * J) ** 2 + (1.0 - gamma) * c * p.gross_rf
    return ClosedFormSolution(
        weights=weights, c=c, J=J, D=d, gamma=gamma,
        expected_excess_return=mean, variance=variance, foc_residual=float(foc),
    )


def objective_g(p: MarketParams, weights: np.ndarray, ra: RiskAversion) -> float:
    """Reduced maximization objective
    ``G(w) = ln(R_f + w'mu) + (1-gamma)/2 * w'sigma w / (R_f + w'mu)^2``.

    Maximizing G is equivalent to maximizing the approximate expected
    utility: the two differ by a monotone transform.
    """
    w = _check_weights(p, weights)
    m = p.gross_rf + float(w @ p.mu)
    if m <= 0.0:
        raise NonPositiveGrossMean(f"R_f + w'mu = {m:.6g} must be positive")
    quad = float(w @ p.sigma @ w)
    return math.log(m) + 0.5 * (1.0 - ra.gamma) * quad / (m * m)


def objective_g_gradient(p: MarketParams, weights: np.ndarray, ra: RiskAversion) -> np.ndarray:
    """Analytic gradient of :func:`objective_g`:
    ``mu/m + (1-gamma) [sigma w * m - (w'sigma w) mu] / m^3`` with
    ``m = R_f + w'mu``."""
    w = _check_weights(p, weights)
    m = p.gross_rf + float(w @ p.mu)
    if m <= 0.0:
        raise NonPositiveGrossMean(f"R_f + w'mu = {m:.6g} must be positive")
    sw = p.sigma @ w
    quad = float(w @ sw)
    return p.mu / m + (1.0 - ra.gamma) * (sw * m - quad * p.mu) / m**3


def approx_expected_utility(
    p: MarketParams,
    weights: np.ndarray,
    ra: RiskAversion,
    w0: float = 1.0,
) -> float:
    """Log-normal approximation of ``E[U(W)]`` at the given weights.

    Uses the closed-form moment of a log-normal variable,
    ``E[X^lam] = exp(alpha lam + beta^2 lam^2 / 2)`` for
    ``X ~ logN(alpha, beta^2)``, applied to the matched gross return:

    ``w0^(1-gamma)/(1-gamma) * exp[(1-gamma) ln(R_f + w'mu)
    + (1-gamma)^2/2 * w'sigma w / (R_f + w'mu)^2]``.
    """
    if not w0 > 0.0:
        raise ValueError(f"w0 must be positive, got {w0}")
    w = _check_weights(p, weights)
    m = p.gross_rf + float(w @ p.mu)
    if m <= 0.0:
        raise NonPositiveGrossMean(f"R_f + w'mu = {m:.6g} must be positive")
    lam = 1.0 - ra.gamma
    quad = float(w @ p.sigma @ w)
    exponent = lam * math.log(m) + 0.5 * lam * lam * quad / (m * m)
    return w0**lam / lam * math.exp(exponent)


def tangency(p: MarketParams) -> TangencyResult:
    """Fully-risky portfolio ``sigma^-1 mu / (1' sigma^-1 mu)``.

    ``gamma_tgc = (J / s + R_f)^2 * s / R_f + 1`` with ``s = 1' sigma^-1 mu``
    is the risk aversion at which the closed-form solution invests nothing in
    the risk-free asset; whenever ``s > 0`` it satisfies
    ``gamma_tgc >= 1 + 4J``.
    """
    sol = p.solve_sigma(p.mu)
    s = float(sol.sum())
    if abs(s) <= 1e-14:
        raise SingularDenominator(f"1' sigma^-1 mu = {s:.3e} is numerically zero")
    J = float(p.mu @ sol)
    gamma_tgc = (J / s + p.gross_rf) ** 2 * s / p.gross_rf + 1.0
    return TangencyResult(weights=sol / s, gamma_tgc=gamma_tgc)


def frontier_point(p: MarketParams, ra: RiskAversion) -> tuple[float, float]:
    """Expected excess return and variance of the closed-form portfolio.

    The pair traces a parabola: ``(w*'mu)^2 = J * (w*'sigma w*)`` exactly,
    and both coordinates decrease strictly in gamma.
    """
    sol = solve_analytical(p, ra)
    return sol.expected_excess_return, sol.variance


def admissible_gamma(p: MarketParams, gamma: float, *, bound_tol: float = BOUND_TOL) -> bool:
    """True when gamma clears the closed-form existence bound ``1 + 4J``."""
    return gamma >= gamma_lower_bound(p) - bound_tol


def _check_weights(p: MarketParams, weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (p.k,):
        raise DimensionMismatch(f"weights must have shape ({p.k},), got {w.shape}")
    return w
