"""Single-period power-utility portfolio choice.

Three solvers for the optimal split between k risky assets and a risk-free
leg under a CRRA investor: a closed form built on a log-normal proxy for
the normal gross portfolio return, gradient ascent on the sampled expected
utility, and a fourth-order-expansion fixed-point benchmark, plus the
seeded simulation machinery to compare them on one shared scenario set.
"""

from .closed_form import (
    ClosedFormSolution,
    TangencyResult,
    approx_expected_utility,
    frontier_point,
    objective_g,
    objective_g_gradient,
    solve_analytical,
    tangency,
)
from .errors import (
    AllScenariosInfeasible,
    AsymmetricSigma,
    CrraOptError,
    DegenerateMu,
    DimensionMismatch,
    GammaBelowBound,
    InvalidParamsFile,
    InvalidPriceSeries,
    InvalidRiskAversion,
    InvalidRiskFreeRate,
    NonFiniteInput,
    NonFiniteIterate,
    NonPositiveGrossMean,
    NonPositiveWealthScenario,
    NotConverged,
    NotPositiveDefinite,
    SingularDenominator,
    SingularSecondMoment,
    StepIntoInfeasible,
    TooFewObservations,
    ValidationError,
)
from .gradient import GdConfig, GdReport, gd_solve, suggest_eta, v0, v0_gradient, v0_hessian
from .market import (
    MarketParams,
    PriceSeries,
    RiskAversion,
    estimate_params,
    gamma_lower_bound,
    make_params,
    read_params_json,
    read_price_csv,
    write_params_json,
)
from .simulation import (
    CellResult,
    ComparisonReport,
    ScenarioSet,
    StrategyOutcome,
    SummaryStats,
    compare,
    ecdf,
    evaluate_strategy,
    simulate,
    summarize,
)
from .taylor import (
    TaylorConfig,
    TaylorReport,
    taylor_initial,
    taylor_initial_population,
    taylor_solve,
    taylor_step,
)

__version__ = "0.1.0"

__all__ = [
    "AllScenariosInfeasible",
    "AsymmetricSigma",
    "CellResult",
    "ClosedFormSolution",
    "ComparisonReport",
    "CrraOptError",
    "DegenerateMu",
    "DimensionMismatch",
    "GammaBelowBound",
    "GdConfig",
    "GdReport",
    "InvalidParamsFile",
    "InvalidPriceSeries",
    "InvalidRiskAversion",
    "InvalidRiskFreeRate",
    "MarketParams",
    "NonFiniteInput",
    "NonFiniteIterate",
    "NonPositiveGrossMean",
    "NonPositiveWealthScenario",
    "NotConverged",
    "NotPositiveDefinite",
    "PriceSeries",
    "RiskAversion",
    "ScenarioSet",
    "SingularDenominator",
    "SingularSecondMoment",
    "StepIntoInfeasible",
    "StrategyOutcome",
    "SummaryStats",
    "TangencyResult",
    "TaylorConfig",
    "TaylorReport",
    "TooFewObservations",
    "ValidationError",
    "approx_expected_utility",
    "compare",
    "ecdf",
    "estimate_params",
    "evaluate_strategy",
    "frontier_point",
    "gamma_lower_bound",
    "gd_solve",
    "make_params",
    "objective_g",
    "objective_g_gradient",
    "read_params_json",
    "read_price_csv",
    "simulate",
    "solve_analytical",
    "suggest_eta",
    "summarize",
    "tangency",
    "taylor_initial",
    "taylor_initial_population",
    "taylor_solve",
    "taylor_step",
    "v0",
    "v0_gradient",
    "v0_hessian",
    "write_params_json",
]
