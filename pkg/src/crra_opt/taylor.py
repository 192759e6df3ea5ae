"""Fourth-order expansion benchmark solver (fixed-point iteration).

Expanding the marginal utility of final wealth to fourth order and solving
the resulting first-order condition gives the update

    w(i+1) = (1/gamma) M2^-1 [ R_f m1
             + gamma(gamma+1)/(2 R_f)       * (1/N) sum (w'R_i)^2 R_i
             - gamma(gamma+1)(gamma+2)/(6 R_f^2) * (1/N) sum (w'R_i)^3 R_i ],

where ``M2 = (1/N) sum R_i R_i'`` and ``m1 = (1/N) sum R_i`` are sample
moments of the shared scenario set.  The zero-weight instance of the update
is the standard starting point ``(R_f/gamma) M2^-1 m1``; iterating to a
fixed point yields the benchmark weights.

``M2`` is factored once per solve and reused.  Expectations are estimated
on the same scenario set used by the other solvers, which removes
cross-method sampling noise from comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from ._chunks import chunked_sum
from .errors import NonFiniteIterate, NotConverged, SingularSecondMoment
from .market import MarketParams, RiskAversion

# Fixed-point damping: after this many consecutive step-size increases the
# update is blended with factor 0.5 (repeatable if oscillation persists).
DAMPING_PATIENCE = 5
DAMPING_FACTOR = 0.5


@dataclass(frozen=True)
class TaylorConfig:
    """Fixed-point stopping rule: quit once ``||w(i+1) - w(i)|| <= tol``."""

    tol: float = 1e-10
    max_iter: int = 1000

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class TaylorReport:
    weights: np.ndarray
    iterations: int
    converged: bool


class _SampleMoments:
    """First/second sample moments with a cached Cholesky factor of M2."""

    def __init__(self, returns: np.ndarray):
        n = returns.shape[0]
        m2 = chunked_sum(lambda s: np.einsum("ij,il->jl", returns[s], returns[s]), n) / n
        m1 = chunked_sum(lambda s: returns[s].sum(axis=0), n) / n
        try:
            self.m2_factor = cho_factor(m2, lower=True)
        except LinAlgError:
            raise SingularSecondMoment(
                "sample second-moment matrix is not positive definite"
            ) from None
        self.m1 = m1
        self.returns = returns
        self.n = n

    def solve_m2(self, b: np.ndarray) -> np.ndarray:
        return cho_solve(self.m2_factor, b)


def _step(moments: _SampleMoments, ra: RiskAversion, gross_rf: float, w: np.ndarray) -> np.ndarray:
    g = ra.gamma
    returns = moments.returns
    x = returns @ w
    quad = chunked_sum(lambda s: np.einsum("ij,i->j", returns[s], x[s] * x[s]), moments.n) / moments.n
    cube = chunked_sum(lambda s: np.einsum("ij,i->j", returns[s], x[s] ** 3), moments.n) / moments.n
    rhs = (
        gross_rf * moments.m1
        + (g * (g + 1.0) / (2.0 * gross_rf)) * quad
        - (g * (g + 1.0) * (g + 2.0) / (6.0 * gross_rf**2)) * cube
    )
    out = moments.solve_m2(rhs) / g
    if not np.isfinite(out).all():
        raise NonFiniteIterate(f"fixed-point update produced non-finite weights: {out}")
    return out


def taylor_initial(scenarios, ra: RiskAversion, gross_rf: float) -> np.ndarray:
    """Starting weights ``(R_f / gamma) M2^-1 m1`` from sample moments.

    Implemented as the fixed-point update evaluated at the zero vector, so
    it is bit-identical to the first step of :func:`taylor_solve`.
    """
    moments = _SampleMoments(scenarios.returns)
    return _step(moments, ra, gross_rf, np.zeros(scenarios.returns.shape[1]))


def taylor_initial_population(p: MarketParams, ra: RiskAversion) -> np.ndarray:
    """Population-moment variant ``(R_f / gamma) (sigma + mu mu')^-1 mu``.

    Useful when exact market parameters are available instead of scenarios.
    """
    m2 = p.sigma + np.outer(p.mu, p.mu)
    try:
        factor = cho_factor(m2, lower=True)
    except LinAlgError:
        raise SingularSecondMoment(
            "population second-moment matrix is not positive definite"
        ) from None
    return (p.gross_rf / ra.gamma) * cho_solve(factor, p.mu)


def taylor_step(scenarios, ra: RiskAversion, gross_rf: float, w: np.ndarray) -> np.ndarray:
    """One fixed-point update of the fourth-order expansion weights."""
    moments = _SampleMoments(scenarios.returns)
    return _step(moments, ra, gross_rf, np.asarray(w, dtype=float))


def taylor_solve(
    scenarios,
    ra: RiskAversion,
    gross_rf: float,
    cfg: TaylorConfig | None = None,
) -> TaylorReport:
    """Iterate the fixed-point update from the sample starting point.

    If the step size ``||w(i+1) - w(i)||`` grows for ``DAMPING_PATIENCE``
    consecutive iterations, updates are damped by ``DAMPING_FACTOR`` (and
    damped again on renewed oscillation).  Raises :class:`NotConverged` with
    the partial report when ``max_iter`` is exhausted.
    """
    if cfg is None:
        cfg = TaylorConfig()
    moments = _SampleMoments(scenarios.returns)
    w = _step(moments, ra, gross_rf, np.zeros(scenarios.returns.shape[1]))
    damping = 1.0
    grow_streak = 0
    prev_delta = np.inf
    for iteration in range(1, cfg.max_iter + 1):
        proposed = _step(moments, ra, gross_rf, w)
        update = proposed - w
        if damping != 1.0:
            update = damping * update
        delta = float(np.linalg.norm(update))
        w = w + update
        if delta <= cfg.tol:
            return TaylorReport(weights=w, iterations=iteration, converged=True)
        if delta > prev_delta:
            grow_streak += 1
            if grow_streak >= DAMPING_PATIENCE:
                damping *= DAMPING_FACTOR
                grow_streak = 0
        else:
            grow_streak = 0
        prev_delta = delta
    report = TaylorReport(weights=w, iterations=cfg.max_iter, converged=False)
    raise NotConverged(
        f"fixed-point step {prev_delta:.3e} > tol {cfg.tol:.3e} after {cfg.max_iter} iterations",
        report,
    )
