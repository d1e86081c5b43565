"""Additive daily forecaster: piecewise-linear trend, Fourier seasonality, holidays.

The model is

    y(t) = a + b t + sum_j d_j max(0, t - c_j)
           + sum_k [w_k sin(2 pi k t / 7) + w'_k cos(2 pi k t / 7)]
           + sum_k [v_k sin(2 pi k t / 365.25) + v'_k cos(...)]
           + sum_h g_h [date(t) == h]

with ``t`` in days since the first training date, fit by ridge least squares
(penalty on everything except the intercept ``a``). A seasonal block is only
used when the training history covers ``min_cycles`` full periods of it;
otherwise its effective order drops to zero (a year of data cannot pin down
yearly terms, and extrapolating them diverges).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadBaseline, EmptyDatabase, EmptyInput, LengthMismatch, SeriesTooShort
from .txstore import TransactionDB

WEEK = 7.0
YEAR = 365.25
MIN_POINTS = 14


@dataclass(frozen=True)
class TimeSeries:
    start: date
    values: np.ndarray  # one value per consecutive day

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("values must be one-dimensional")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_points(cls, points: Sequence[tuple[date, float]]) -> "TimeSeries":
        if not points:
            raise EmptyInput("no points")
        dates = [d for d, _ in points]
        for a, b in zip(dates, dates[1:]):
            if b - a != timedelta(days=1):
                raise ValueError(f"dates must be consecutive days: {a} then {b}")
        return cls(dates[0], np.array([v for _, v in points], dtype=float))

    def __len__(self):
        return len(self.values)

    @property
    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    @property
    def points(self) -> list[tuple[date, float]]:
        return list(zip(self.dates, self.values.tolist()))

    def split(self, holdout_frac: float = 0.2) -> tuple["TimeSeries", "TimeSeries"]:
        """Split off the trailing ``holdout_frac`` of days."""
        n_test = int(round(len(self) * holdout_frac))
        if not 0 < n_test < len(self):
            raise ValueError("holdout leaves an empty train or test part")
        cut = len(self) - n_test
        return (TimeSeries(self.start, self.values[:cut]),
                TimeSeries(self.start + timedelta(days=cut), self.values[cut:]))


@dataclass(frozen=True)
class ForecastConfig:
    n_changepoints: int = 25
    changepoint_range: float = 0.8
    weekly_order: int = 3
    yearly_order: int = 10
    ridge_lambda: float = 1e-3
    holidays: tuple[date, ...] = ()
    min_cycles: float = 2.0

    def __post_init__(self):
        if self.n_changepoints < 0 or self.weekly_order < 0 or self.yearly_order < 0:
            raise ValueError("changepoint count and Fourier orders must be >= 0")
        if not 0 < self.changepoint_range <= 1:
            raise ValueError("changepoint_range must lie in (0, 1]")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")
        if self.min_cycles < 0:
            raise ValueError("min_cycles must be >= 0")
        object.__setattr__(self, "holidays", tuple(sorted(set(self.holidays))))


@dataclass(frozen=True)
class ForecastPoint:
    ds: date
    yhat: float
    trend_part: float
    seasonal_part: float
    holiday_part: float


@dataclass(frozen=True)
class ForecastModel:
    config: ForecastConfig
    start: date
    n_train: int
    changepoints: np.ndarray  # day offsets
    weekly_order: int  # effective orders after the min_cycles rule
    yearly_order: int
    intercept: float
    slope: float
    deltas: np.ndarray
    weekly: np.ndarray  # [sin_1, cos_1, sin_2, cos_2, ...]
    yearly: np.ndarray
    holiday_effects: np.ndarray
    train_mean: float
    residuals: dict = field(default_factory=dict)

    @property
    def final_slope(self) -> float:
        return self.slope + float(self.deltas.sum())

    def components(self, t: np.ndarray, dates: Sequence[date]):
        t = np.asarray(t, dtype=float)
        trend = self.intercept + self.slope * t + _hinges(t, self.changepoints) @ self.deltas
        seasonal = (_fourier(t, WEEK, self.weekly_order) @ self.weekly
                    + _fourier(t, YEAR, self.yearly_order) @ self.yearly)
        holiday = _holiday_columns(dates, self.config.holidays) @ self.holiday_effects
        return trend, seasonal, holiday

    def _points(self, offsets) -> list[ForecastPoint]:
        offsets = np.asarray(offsets)
        dates = [self.start + timedelta(days=int(i)) for i in offsets]
        trend, seasonal, holiday = self.components(offsets, dates)
        return [ForecastPoint(d, float(tr + s + h), float(tr), float(s), float(h))
                for d, tr, s, h in zip(dates, trend, seasonal, holiday)]

    def fitted(self) -> list[ForecastPoint]:
        return self._points(np.arange(self.n_train))


def _fourier(t, period, order) -> np.ndarray:
    cols = []
    for k in range(1, order + 1):
        arg = 2.0 * math.pi * k * t / period
        cols += [np.sin(arg), np.cos(arg)]
    return np.column_stack(cols) if cols else np.zeros((len(t), 0))


def _hinges(t, changepoints) -> np.ndarray:
    if len(changepoints) == 0:
        return np.zeros((len(t), 0))
    return np.maximum(0.0, t[:, None] - np.asarray(changepoints, dtype=float)[None, :])


def _holiday_columns(dates, holidays) -> np.ndarray:
    cols = np.zeros((len(dates), len(holidays)))
    index = {h: j for j, h in enumerate(holidays)}
    for i, d in enumerate(dates):
        j = index.get(d)
        if j is not None:
            cols[i, j] = 1.0
    return cols


def changepoint_offsets(n: int, n_changepoints: int, changepoint_range: float) -> np.ndarray:
    """Evenly spaced changepoints over the first ``changepoint_range`` of history."""
    hist = int(math.floor(n * changepoint_range))
    if n_changepoints == 0 or hist < 2:
        return np.zeros(0)
    idx = np.linspace(0, hist - 1, n_changepoints + 1).round().astype(int)[1:]
    return np.unique(idx).astype(float)


def aggregate_daily(db: TransactionDB) -> TimeSeries:
    """Total items purchased per calendar day, zero-filling empty days."""
    if len(db) == 0:
        raise EmptyDatabase("cannot aggregate an empty database")
    days = [b.timestamp.date() for b in db.baskets.values()]
    first, last = min(days), max(days)
    values = np.zeros((last - first).days + 1)
    for b in db.baskets.values():
        values[(b.timestamp.date() - first).days] += len(b.items)
    return TimeSeries(first, values)


def fit(ts: TimeSeries, cfg: ForecastConfig = ForecastConfig()) -> ForecastModel:
    n = len(ts)
    if n < MIN_POINTS:
        raise SeriesTooShort(f"need at least {MIN_POINTS} days, got {n}")
    t = np.arange(n, dtype=float)
    cps = changepoint_offsets(n, cfg.n_changepoints, cfg.changepoint_range)
    weekly_order = cfg.weekly_order if n >= cfg.min_cycles * WEEK else 0
    yearly_order = cfg.yearly_order if n >= cfg.min_cycles * YEAR else 0
    blocks = [
        np.ones((n, 1)),
        t[:, None],
        _hinges(t, cps),
        _fourier(t, WEEK, weekly_order),
        _fourier(t, YEAR, yearly_order),
        _holiday_columns(ts.dates, cfg.holidays),
    ]
    X = np.hstack(blocks)
    y = ts.values
    p = X.shape[1]
    if n < 2 * p:
        warnings.warn(f"{n} days for {p} coefficients; fit is weakly determined", stacklevel=2)
    if cfg.ridge_lambda > 0:
        penalty = math.sqrt(cfg.ridge_lambda) * np.eye(p)[1:]
        A = np.vstack([X, penalty])
        b = np.concatenate([y, np.zeros(p - 1)])
    else:
        A, b = X, y
    beta = np.linalg.lstsq(A, b, rcond=None)[0]

    sizes = [blk.shape[1] for blk in blocks]
    parts = np.split(beta, np.cumsum(sizes)[:-1])
    resid = y - X @ beta
    model = ForecastModel(
        config=cfg,
        start=ts.start,
        n_train=n,
        changepoints=cps,
        weekly_order=weekly_order,
        yearly_order=yearly_order,
        intercept=float(parts[0][0]),
        slope=float(parts[1][0]),
        deltas=parts[2],
        weekly=parts[3],
        yearly=parts[4],
        holiday_effects=parts[5],
        train_mean=float(y.mean()),
        residuals={
            "rmse": float(np.sqrt(np.mean(resid ** 2))),
            "mae": float(np.mean(np.abs(resid))),
            "max_abs": float(np.max(np.abs(resid))),
        },
    )
    return model


def predict(model: ForecastModel, horizon_days: int) -> list[ForecastPoint]:
    """Forecast the ``horizon_days`` days following the training window."""
    if horizon_days < 1:
        raise ValueError("horizon_days must be positive")
    return model._points(np.arange(model.n_train, model.n_train + horizon_days))


def percentage_change(points: Sequence[ForecastPoint], baseline: float) -> list[tuple[date, float]]:
    if not baseline > 0:
        raise BadBaseline(f"baseline must be positive, got {baseline}")
    return [(p.ds, (p.yhat - baseline) / baseline * 100.0) for p in points]


class Metrics(NamedTuple):
    mae: float
    mse: float
    rmse: float


def evaluate(actual: Sequence[float], predicted: Sequence[float]) -> Metrics:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise LengthMismatch(f"{len(a)} actual vs {len(p)} predicted values")
    if a.size == 0:
        raise EmptyInput("nothing to evaluate")
    err = a - p
    mse = float(np.mean(err ** 2))
    return Metrics(float(np.mean(np.abs(err))), mse, math.sqrt(mse))


def backtest(ts: TimeSeries, cfg: ForecastConfig = ForecastConfig(),
             holdout_frac: float = 0.2) -> tuple[Metrics, list[ForecastPoint]]:
    """Fit on the leading part of ``ts`` and score the trailing holdout."""
    train, test = ts.split(holdout_frac)
    model = fit(train, cfg)
    points = predict(model, len(test))
    return evaluate(test.values, [pt.yhat for pt in points]), points
