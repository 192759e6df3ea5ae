"""Seeded scenario generation, strategy evaluation, and study summaries.

Scenario draws are ``R_i = mu + L z_i`` with ``L`` the lower Cholesky factor
of sigma and ``z_i`` i.i.d. standard normal from a PCG64 generator, so a
``(params, n, seed)`` triple always reproduces the same scenario set on a
given build.  One scenario set is shared by every method and risk-aversion
level inside a comparison run, which makes the per-method statistics
directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import solve_analytical
from .errors import AllScenariosInfeasible, GammaBelowBound, CrraOptError
from .gradient import GdConfig, gd_solve, suggest_eta
from .market import MarketParams, RiskAversion, gamma_lower_bound
from .taylor import TaylorConfig, taylor_solve

METHODS = ("analytical", "taylor", "gd")

# Median-absolute-deviation scale for consistency with the standard
# deviation under normality.
MAD_SCALE = 1.4826


@dataclass(frozen=True)
class ScenarioSet:
    """N simulated excess-return vectors plus the seed that produced them."""

    returns: np.ndarray
    seed: int

    def __post_init__(self):
        returns = np.asarray(self.returns, dtype=float)
        if returns.ndim != 2:
            raise ValueError(f"returns must be 2-D (N, k), got shape {returns.shape}")
        if not np.isfinite(returns).all():
            raise ValueError("scenario returns must be finite")
        returns = np.array(returns)
        returns.setflags(write=False)
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def n(self) -> int:
        return self.returns.shape[0]

    @property
    def k(self) -> int:
        return self.returns.shape[1]


@dataclass(frozen=True)
class StrategyOutcome:
    """Per-scenario wealth and utility for one (method, gamma, weights) cell.

    Wealth is ``w0 * (R_f + w'R_i)``.  Utilities at non-positive wealth are
    undefined and stored as NaN; they are counted in ``infeasible_count``
    rather than silently dropped.
    """

    method: str
    gamma: float
    weights: np.ndarray
    wealths: np.ndarray
    utilities: np.ndarray
    infeasible_count: int


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    sd: float
    median: float
    mad: float


@dataclass(frozen=True)
class CellResult:
    """One (gamma, method) cell of a comparison run."""

    weights: np.ndarray | None
    stats: SummaryStats | None
    infeasible_count: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class ComparisonReport:
    """Per-(gamma, method) summary statistics plus ECDF tables.

    ``cells`` maps ``(gamma, method)`` to :class:`CellResult`; ``ecdfs`` maps
    ``(gamma, method, kind)`` with kind in {"wealth", "utility"} to an
    ``(points, 2)`` array of ``(x, F(x))`` rows.
    """

    gammas: tuple[float, ...]
    n: int
    seed: int
    cells: dict = field(default_factory=dict)
    ecdfs: dict = field(default_factory=dict)


def simulate(p: MarketParams, n: int, seed: int) -> ScenarioSet:
    """Draw ``n`` excess-return vectors from ``N(mu, sigma)``.

    The draw stream is determined solely by ``seed``; the covariance enters
    linearly through the cached lower Cholesky factor.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((int(n), p.k))
    returns = p.mu + z @ np.asarray(p.chol_lower).T
    return ScenarioSet(returns=returns, seed=seed)


def evaluate_strategy(
    scenarios: ScenarioSet,
    weights,
    ra: RiskAversion,
    gross_rf: float,
    method: str = "custom",
    w0: float = 1.0,
) -> StrategyOutcome:
    """Realized wealth and utility of fixed weights on every scenario."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (scenarios.k,):
        raise ValueError(f"weights must have shape ({scenarios.k},), got {w.shape}")
    if not w0 > 0.0:
        raise ValueError(f"w0 must be positive, got {w0}")
    wealths = w0 * (gross_rf + scenarios.returns @ w)
    feasible = wealths > 0.0
    infeasible_count = int(wealths.shape[0] - np.count_nonzero(feasible))
    if infeasible_count == wealths.shape[0]:
        raise AllScenariosInfeasible("every scenario yields non-positive wealth")
    lam = 1.0 - ra.gamma
    utilities = np.full(wealths.shape[0], np.nan)
    utilities[feasible] = wealths[feasible] ** lam / lam
    return StrategyOutcome(
        method=method, gamma=ra.gamma, weights=w,
        wealths=wealths, utilities=utilities, infeasible_count=infeasible_count,
    )


def summarize(values) -> SummaryStats:
    """Mean, sd (n-1 denominator), median, and scaled MAD of a sample.

    The median averages the two middle order statistics for even sizes; the
    MAD is ``MAD_SCALE * median(|x - median(x)|)`` so it estimates the
    standard deviation under normality.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape[0] < 2:
        raise ValueError("summarize needs a 1-D sample of size >= 2")
    med = float(np.median(x))
    return SummaryStats(
        mean=float(x.mean()),
        sd=float(x.std(ddof=1)),
        median=med,
        mad=MAD_SCALE * float(np.median(np.abs(x - med))),
    )


def ecdf(values, grid_points: int) -> np.ndarray:
    """Right-continuous empirical CDF on an even grid from min to max.

    Returns a ``(grid_points, 2)`` array of ``(x, F(x))`` rows with
    ``F(x) = #(values <= x) / N``; the last row always has ``F = 1``.
    """
    x = np.sort(np.asarray(values, dtype=float))
    if x.shape[0] < 1:
        raise ValueError("ecdf needs at least one value")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    grid = np.linspace(x[0], x[-1], int(grid_points))
    f = np.searchsorted(x, grid, side="right") / x.shape[0]
    return np.column_stack([grid, f])


def compare(
    p: MarketParams,
    gammas,
    n: int,
    seed: int,
    gd_cfg: GdConfig | None = None,
    taylor_cfg: TaylorConfig | None = None,
    ecdf_points: int = 256,
) -> ComparisonReport:
    """Run the three solvers on one shared scenario set and summarize.

    For each gamma: the closed form solves on the exact (mu, sigma); the
    fixed-point and gradient solvers consume the simulated scenarios.  All
    strategies are then evaluated on the same scenarios; utility summary
    statistics exclude (but count) non-positive-wealth draws.

    When ``gd_cfg`` is None a curvature-matched learning rate is chosen per
    gamma via :func:`suggest_eta`; pass an explicit config to pin ``eta``.
    Failures inside one (gamma, method) cell are recorded on that cell and
    do not abort the rest of the run.
    """
    gammas = tuple(float(g) for g in gammas)
    bound = gamma_lower_bound(p)
    for g in gammas:
        if g < bound - 1e-12:
            raise GammaBelowBound(g, bound)
    scenarios = simulate(p, n, seed)
    report = ComparisonReport(gammas=gammas, n=int(n), seed=int(seed))
    for g in gammas:
        ra = RiskAversion(g)
        weight_sets: dict[str, np.ndarray | None] = {}
        errors: dict[str, str | None] = {}
        try:
            weight_sets["analytical"] = solve_analytical(p, ra).weights
            errors["analytical"] = None
        except CrraOptError as exc:
            weight_sets["analytical"] = None
            errors["analytical"] = str(exc)
        try:
            tcfg = taylor_cfg if taylor_cfg is not None else TaylorConfig()
            weight_sets["taylor"] = taylor_solve(scenarios, ra, p.gross_rf, tcfg).weights
            errors["taylor"] = None
        except CrraOptError as exc:
            weight_sets["taylor"] = None
            errors["taylor"] = str(exc)
        try:
            cfg = gd_cfg if gd_cfg is not None else GdConfig(eta=suggest_eta(scenarios, ra))
            weight_sets["gd"] = gd_solve(scenarios, ra, p.gross_rf, cfg).weights
            errors["gd"] = None
        except CrraOptError as exc:
            weight_sets["gd"] = None
            errors["gd"] = str(exc)
        for method in METHODS:
            w = weight_sets[method]
            if w is None:
                report.cells[(g, method)] = CellResult(
                    weights=None, stats=None, infeasible_count=0, error=errors[method]
                )
                continue
            try:
                outcome = evaluate_strategy(scenarios, w, ra, p.gross_rf, method=method)
                finite = outcome.utilities[np.isfinite(outcome.utilities)]
                stats = summarize(finite)
                report.cells[(g, method)] = CellResult(
                    weights=w, stats=stats, infeasible_count=outcome.infeasible_count
                )
                report.ecdfs[(g, method, "wealth")] = ecdf(outcome.wealths, ecdf_points)
                report.ecdfs[(g, method, "utility")] = ecdf(finite, ecdf_points)
            except CrraOptError as exc:
                report.cells[(g, method)] = CellResult(
                    weights=w, stats=None, infeasible_count=0, error=str(exc)
                )
    return report
