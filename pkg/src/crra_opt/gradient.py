"""Gradient-ascent maximization of the sampled expected power utility.

The objective over a scenario set ``{R_i}`` is

    V0(w) = (1/N) sum_i (R_f + w'R_i)^(1-gamma) / (1-gamma),

with gradient ``(1/N) sum_i R_i / (R_f + w'R_i)^gamma`` and Hessian
``-(gamma/N) sum_i R_i R_i' / (R_f + w'R_i)^(1+gamma)``, which is negative
definite on the feasible region, so fixed-step ascent converges for any
stable learning rate.  The iteration is

    w(i+1) = w(i) + eta * grad V0(w(i)),

stopped once the Euclidean gradient norm falls below ``tol``.  Steps that
would push some scenario wealth to zero or below are halved (up to 60
times) before failing, which preserves both feasibility and ascent.

All scenario reductions run through the fixed chunking in ``_chunks``, so
reports are bit-identical for a given input regardless of the worker count.

The same ascent applies to any concave utility: replace the power kernel in
the gradient by ``U'(W0 (R_f + w'R_i)) R_i`` and the Hessian stays negative
definite by concavity of U.  This module pins the power-utility instance;
the hooks above are the extension point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._chunks import chunked_sum
from .errors import (
    NonPositiveWealthScenario,
    NotConverged,
    StepIntoInfeasible,
)
from .market import RiskAversion

MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class GdConfig:
    """Fixed-step ascent settings.

    ``eta=0.1`` is the customary default; for markets with per-period
    covariance far from unit scale, :func:`suggest_eta` picks a step matched
    to the sampled curvature instead.  ``initial_weights=None`` starts from
    the all risk-free portfolio (the zero vector), which is always feasible.
    """

    eta: float = 0.1
    tol: float = 1e-8
    max_iter: int = 100_000
    initial_weights: np.ndarray | None = None

    def __post_init__(self):
        if not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.initial_weights is not None:
            w = np.array(self.initial_weights, dtype=float)
            w.setflags(write=False)
            object.__setattr__(self, "initial_weights", w)


@dataclass(frozen=True)
class GdReport:
    """Ascent outcome; ``converged`` iff the final gradient norm is <= tol."""

    weights: np.ndarray
    iterations: int
    final_gradient_norm: float
    objective: float
    converged: bool


def _wealth(returns: np.ndarray, weights: np.ndarray, gross_rf: float) -> np.ndarray:
    return gross_rf + returns @ weights


def _require_positive(wealth: np.ndarray) -> None:
    bad = wealth <= 0.0
    if bad.any():
        raise NonPositiveWealthScenario(int(np.argmax(bad)))


def _v0_from_wealth(wealth: np.ndarray, gamma: float) -> float:
    n = wealth.shape[0]
    total = chunked_sum(lambda s: np.sum(wealth[s] ** (1.0 - gamma)), n)
    return float(total) / n / (1.0 - gamma)


def _gradient_from_wealth(returns: np.ndarray, wealth: np.ndarray, gamma: float) -> np.ndarray:
    n = wealth.shape[0]
    total = chunked_sum(
        lambda s: np.einsum("ij,i->j", returns[s], wealth[s] ** (-gamma)), n
    )
    return total / n


def v0(scenarios, weights, ra: RiskAversion, gross_rf: float) -> float:
    """Sampled expected power utility at the given weights.

    Raises :class:`NonPositiveWealthScenario` naming the first scenario with
    ``R_f + w'R_i <= 0``.
    """
    wealth = _wealth(scenarios.returns, np.asarray(weights, dtype=float), gross_rf)
    _require_positive(wealth)
    return _v0_from_wealth(wealth, ra.gamma)


def v0_gradient(scenarios, weights, ra: RiskAversion, gross_rf: float) -> np.ndarray:
    """Gradient ``(1/N) sum_i R_i (R_f + w'R_i)^(-gamma)``."""
    wealth = _wealth(scenarios.returns, np.asarray(weights, dtype=float), gross_rf)
    _require_positive(wealth)
    return _gradient_from_wealth(scenarios.returns, wealth, ra.gamma)


def v0_hessian(scenarios, weights, ra: RiskAversion, gross_rf: float) -> np.ndarray:
    """Hessian ``-(gamma/N) sum_i R_i R_i' (R_f + w'R_i)^(-(1+gamma))``.

    Negative definite wherever wealth stays positive; exposed for concavity
    diagnostics.
    """
    returns = scenarios.returns
    wealth = _wealth(returns, np.asarray(weights, dtype=float), gross_rf)
    _require_positive(wealth)
    n = wealth.shape[0]
    total = chunked_sum(
        lambda s: np.einsum(
            "ij,i,il->jl", returns[s], wealth[s] ** (-(1.0 + ra.gamma)), returns[s]
        ),
        n,
    )
    return -(ra.gamma / n) * total


def suggest_eta(scenarios, ra: RiskAversion, safety: float = 0.8) -> float:
    """Curvature-matched learning rate ``safety / (gamma * lambda_max(M2))``.

    ``M2 = (1/N) sum_i R_i R_i'`` bounds the Hessian scale near the start of
    the ascent, so this step is stable while converging orders of magnitude
    faster than a unit-scale ``eta`` when returns have small variance.
    """
    returns = scenarios.returns
    n = returns.shape[0]
    m2 = chunked_sum(lambda s: np.einsum("ij,il->jl", returns[s], returns[s]), n) / n
    lam_max = float(np.linalg.eigvalsh(m2)[-1])
    if lam_max <= 0.0:
        raise ValueError("second-moment matrix has no positive eigenvalue")
    return safety / (ra.gamma * lam_max)


def gd_solve(scenarios, ra: RiskAversion, gross_rf: float, cfg: GdConfig | None = None) -> GdReport:
    """Run fixed-step gradient ascent on the sampled utility.

    Returns a converged :class:`GdReport`; raises :class:`NotConverged`
    (with the partial report attached) if ``max_iter`` steps do not bring
    the gradient norm below ``tol``, and :class:`StepIntoInfeasible` if step
    halving cannot keep every scenario wealth positive.
    """
    if cfg is None:
        cfg = GdConfig()
    returns = scenarios.returns
    k = returns.shape[1]
    if cfg.initial_weights is None:
        w = np.zeros(k)
    else:
        w = np.array(cfg.initial_weights, dtype=float)
    wealth = _wealth(returns, w, gross_rf)
    _require_positive(wealth)

    steps = 0
    while True:
        grad = _gradient_from_wealth(returns, wealth, ra.gamma)
        norm = float(np.linalg.norm(grad))
        if norm <= cfg.tol:
            return GdReport(
                weights=w, iterations=steps, final_gradient_norm=norm,
                objective=_v0_from_wealth(wealth, ra.gamma), converged=True,
            )
        if steps >= cfg.max_iter:
            report = GdReport(
                weights=w, iterations=steps, final_gradient_norm=norm,
                objective=_v0_from_wealth(wealth, ra.gamma), converged=False,
            )
            raise NotConverged(
                f"gradient norm {norm:.3e} > tol {cfg.tol:.3e} after {steps} iterations",
                report,
            )
        step = cfg.eta * grad
        for _ in range(MAX_BACKTRACKS + 1):
            cand = w + step
            cand_wealth = _wealth(returns, cand, gross_rf)
            if (cand_wealth > 0.0).all():
                break
            step = 0.5 * step
        else:
            raise StepIntoInfeasible(
                f"no feasible step after {MAX_BACKTRACKS} halvings at iteration {steps}"
            )
        w, wealth = cand, cand_wealth
        steps += 1
