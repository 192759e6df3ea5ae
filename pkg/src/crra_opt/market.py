"""Market model: parameter containers, validation, and moment estimation.

The market is a k-asset single-period model.  Excess returns (net asset
return minus the net risk-free rate) are described by a mean vector ``mu``
and a positive-definite covariance ``sigma``; the risk-free leg earns the
gross return ``R_f = 1 + r_f``.  End-of-period wealth for weights ``w`` on
the risky assets is ``W = W0 * (R_f + w' R)``.

All containers are frozen and hold read-only arrays; every operation is a
pure function, safe to share across threads.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import cho_solve

from .errors import (
    AsymmetricSigma,
    DimensionMismatch,
    InvalidParamsFile,
    InvalidPriceSeries,
    InvalidRiskAversion,
    InvalidRiskFreeRate,
    NonFiniteInput,
    NotPositiveDefinite,
    TooFewObservations,
    ValidationError,
)

# Relative asymmetry of a covariance input beyond this is rejected outright;
# anything smaller is symmetrized to (A + A') / 2 before the Cholesky check.
SYMMETRY_RTOL = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MarketParams:
    """Validated market parameters.

    Attributes
    ----------
    mu : ndarray, shape (k,)
        Per-period mean of excess returns.
    sigma : ndarray, shape (k, k)
        Per-period covariance of excess returns (symmetric positive definite).
    r_f : float
        Per-period net risk-free rate; the gross return is ``1 + r_f > 0``.
    asset_names : tuple of str, optional
        Labels carried through estimation and serialization.
    """

    mu: np.ndarray
    sigma: np.ndarray
    r_f: float
    asset_names: tuple[str, ...] | None = None
    chol_lower: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        if mu.ndim != 1 or mu.shape[0] < 1:
            raise DimensionMismatch(f"mu must be a non-empty vector, got shape {mu.shape}")
        k = mu.shape[0]
        if sigma.shape != (k, k):
            raise DimensionMismatch(f"sigma must have shape ({k}, {k}), got {sigma.shape}")
        if not (np.isfinite(mu).all() and np.isfinite(sigma).all() and np.isfinite(self.r_f)):
            raise NonFiniteInput("mu, sigma and r_f must all be finite")
        scale = float(np.abs(sigma).max())
        asym = float(np.abs(sigma - sigma.T).max())
        if scale > 0.0 and asym > SYMMETRY_RTOL * scale:
            raise AsymmetricSigma(
                f"sigma asymmetry {asym:.3e} exceeds {SYMMETRY_RTOL:.0e} relative"
            )
        sigma = (sigma + sigma.T) / 2.0
        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite("sigma has no Cholesky factorization") from None
        if not 1.0 + self.r_f > 0.0:
            raise InvalidRiskFreeRate(f"gross risk-free return 1 + {self.r_f} is not positive")
        object.__setattr__(self, "mu", _readonly(mu))
        object.__setattr__(self, "sigma", _readonly(sigma))
        object.__setattr__(self, "r_f", float(self.r_f))
        object.__setattr__(self, "chol_lower", _readonly(chol))
        if self.asset_names is not None:
            names = tuple(str(n) for n in self.asset_names)
            if len(names) != k:
                raise DimensionMismatch(f"expected {k} asset names, got {len(names)}")
            object.__setattr__(self, "asset_names", names)

    @property
    def k(self) -> int:
        return self.mu.shape[0]

    @property
    def gross_rf(self) -> float:
        """Gross risk-free return 1 + r_f."""
        return 1.0 + self.r_f

    def solve_sigma(self, b: np.ndarray) -> np.ndarray:
        """Return ``sigma^-1 b`` via the cached Cholesky factor (no inverse)."""
        return cho_solve((np.asarray(self.chol_lower), True), np.asarray(b, dtype=float))


@dataclass(frozen=True)
class RiskAversion:
    """Relative risk aversion coefficient for the power utility
    ``U(W) = W^(1-gamma) / (1-gamma)``; requires gamma > 0 and gamma != 1."""

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not np.isfinite(g) or g <= 0.0 or g == 1.0:
            raise InvalidRiskAversion(f"gamma must be positive and != 1, got {self.gamma}")
        object.__setattr__(self, "gamma", g)


@dataclass(frozen=True)
class PriceSeries:
    """Ordered price history for k assets.

    Requires at least three rows (two return observations), strictly
    increasing dates and strictly positive, finite prices.
    """

    dates: tuple[dt.date, ...]
    prices: np.ndarray
    asset_names: tuple[str, ...]

    def __post_init__(self):
        prices = np.asarray(self.prices, dtype=float)
        if prices.ndim != 2:
            raise DimensionMismatch(f"prices must be 2-D (T, k), got shape {prices.shape}")
        t, k = prices.shape
        if t < 3:
            raise TooFewObservations(f"need at least 3 price rows, got {t}")
        if len(self.dates) != t:
            raise DimensionMismatch(f"{len(self.dates)} dates for {t} price rows")
        if len(self.asset_names) != k:
            raise DimensionMismatch(f"{len(self.asset_names)} names for {k} assets")
        if not np.isfinite(prices).all():
            raise NonFiniteInput("prices must be finite")
        if not (prices > 0.0).all():
            raise InvalidPriceSeries("all prices must be strictly positive")
        dates = tuple(self.dates)
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise InvalidPriceSeries("dates must be strictly increasing")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "prices", _readonly(prices))
        object.__setattr__(self, "asset_names", tuple(str(n) for n in self.asset_names))

    @property
    def t(self) -> int:
        return self.prices.shape[0]

    @property
    def k(self) -> int:
        return self.prices.shape[1]


def make_params(
    mu,
    sigma,
    r_f: float,
    asset_names=None,
) -> MarketParams:
    """Validate and assemble market parameters.

    ``sigma`` is symmetrized to ``(A + A')/2`` (rejecting asymmetry beyond
    ``SYMMETRY_RTOL`` relative) and must admit a Cholesky factorization.

    Raises
    ------
    NotPositiveDefinite, DimensionMismatch, NonFiniteInput, AsymmetricSigma,
    InvalidRiskFreeRate
    """
    names = tuple(asset_names) if asset_names is not None else None
    return MarketParams(mu=np.asarray(mu, dtype=float), sigma=np.asarray(sigma, dtype=float),
                        r_f=float(r_f), asset_names=names)


def estimate_params(series: PriceSeries, r_f: float) -> MarketParams:
    """Estimate unconditional excess-return moments from a price history.

    Simple net returns ``P_t / P_{t-1} - 1`` are computed per asset, the
    net risk-free rate is subtracted, and the sample mean and the unbiased
    (n-1 denominator) sample covariance are wrapped via :func:`make_params`.

    The estimator only consumes price ratios, so it is agnostic to the price
    convention (adjusted closes, futures settlements, total-return indexes);
    pick one convention per file and keep it consistent across assets.
    """
    prices = np.asarray(series.prices, dtype=float)
    returns = prices[1:] / prices[:-1] - 1.0
    excess = returns - float(r_f)
    mu = excess.mean(axis=0)
    centered = excess - mu
    sigma = centered.T @ centered / (excess.shape[0] - 1)
    return make_params(mu, sigma, r_f, asset_names=series.asset_names)


def gamma_lower_bound(p: MarketParams) -> float:
    """Smallest admissible risk aversion, ``1 + 4 mu' sigma^-1 mu``.

    Computed with a Cholesky solve; never forms ``sigma^-1`` explicitly.
    """
    return 1.0 + 4.0 * float(p.mu @ p.solve_sigma(p.mu))


# ---------------------------------------------------------------------------
# File formats: price CSV and params JSON
# ---------------------------------------------------------------------------

def read_price_csv(path) -> PriceSeries:
    """Read a price history CSV with header ``date,<name1>,...,<namek>``.

    Dates are ISO-8601, prices use '.' as the decimal point, the file is
    UTF-8.  Missing or unparsable cells are a hard error; no imputation.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise InvalidPriceSeries(f"{path}: empty price file")
    header = rows[0]
    if len(header) < 2 or header[0].strip().lower() != "date":
        raise InvalidPriceSeries(f"{path}: header must be 'date,<name1>,...,<namek>'")
    names = tuple(h.strip() for h in header[1:])
    dates: list[dt.date] = []
    prices: list[list[float]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InvalidPriceSeries(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            dates.append(dt.date.fromisoformat(row[0].strip()))
        except ValueError:
            raise InvalidPriceSeries(f"{path}:{lineno}: bad ISO date {row[0]!r}") from None
        cells = []
        for name, cell in zip(names, row[1:]):
            cell = cell.strip()
            if not cell:
                raise InvalidPriceSeries(f"{path}:{lineno}: missing price for {name!r}")
            try:
                cells.append(float(cell))
            except ValueError:
                raise InvalidPriceSeries(f"{path}:{lineno}: bad price {cell!r} for {name!r}") from None
        prices.append(cells)
    return PriceSeries(dates=tuple(dates), prices=np.asarray(prices, dtype=float), asset_names=names)


def write_params_json(p: MarketParams, path) -> None:
    """Write parameters as JSON with shortest round-trip float formatting."""
    payload: dict = {
        "mu": [float(x) for x in p.mu],
        "sigma": [[float(x) for x in row] for row in p.sigma],
        "r_f": float(p.r_f),
    }
    if p.asset_names is not None:
        payload["asset_names"] = list(p.asset_names)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_params_json(path) -> MarketParams:
    """Read parameters written by :func:`write_params_json`."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParamsFile(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise InvalidParamsFile(f"{path}: top-level JSON object expected")
    missing = [key for key in ("mu", "sigma", "r_f") if key not in payload]
    if missing:
        raise InvalidParamsFile(f"{path}: missing keys {missing}")
    try:
        return make_params(
            payload["mu"], payload["sigma"], payload["r_f"],
            asset_names=payload.get("asset_names"),
        )
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidParamsFile(f"{path}: malformed parameter payload ({exc})") from None
