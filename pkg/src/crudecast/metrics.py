"""Evaluation metrics for direction forecasts.

Hit rate counts sign agreement between target and output (a zero product
is a miss). The information coefficient compares prediction error to the
one-step naive predictor's error; values below 1 beat the naive forecast.
Pearson r is reported as absent (None) when either vector is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DataError

METRIC_FIELDS = ("hit_rate", "rmse", "mse", "mae", "sse", "r", "r_squared", "ic")


def _check_pair(targets, outputs) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(targets, dtype=np.float64)
    o = np.asarray(outputs, dtype=np.float64)
    if t.shape != o.shape or t.ndim != 1:
        raise DataError(f"expected equal-length vectors, got {t.shape} and {o.shape}")
    if len(t) == 0:
        raise DataError("empty input")
    return t, o


def hit_rate(targets, outputs) -> float:
    """Fraction of samples where target and output share a sign."""
    t, o = _check_pair(targets, outputs)
    return float(np.mean(t * o > 0.0))


class ErrorStats(NamedTuple):
    rmse: float
    mse: float
    mae: float
    sse: float
    r: float | None
    r_squared: float | None


def error_stats(targets, outputs) -> ErrorStats:
    t, o = _check_pair(targets, outputs)
    err = o - t
    sse = float(err @ err)
    mse = sse / len(t)
    rmse = float(np.sqrt(mse))
    mae = float(np.mean(np.abs(err)))
    r = _pearson(t, o)
    return ErrorStats(rmse, mse, mae, sse, r, None if r is None else r * r)


def _pearson(t: np.ndarray, o: np.ndarray) -> float | None:
    if len(t) < 2:
        return None
    td = t - t.mean()
    od = o - o.mean()
    st = float(td @ td)
    so = float(od @ od)
    if st == 0.0 or so == 0.0:
        return None
    return float((td @ od) / np.sqrt(st * so))


def info_coefficient(actual, predicted, prev_actual: float) -> float:
    """sqrt(sum (y_t - x_t)^2) / sqrt(sum (x_t - x_{t-1})^2), with
    prev_actual supplying x_0 for the first denominator term."""
    x, y = _check_pair(actual, predicted)
    lagged = np.concatenate(([prev_actual], x[:-1]))
    denom = float(np.sum((x - lagged) ** 2))
    if denom == 0.0:
        raise DataError("information coefficient undefined: actual series is constant")
    num = float(np.sum((y - x) ** 2))
    return float(np.sqrt(num) / np.sqrt(denom))


@dataclass(frozen=True)
class MetricBundle:
    """All metrics for one evaluation segment."""

    hit_rate: float
    rmse: float
    mse: float
    mae: float
    sse: float
    r: float | None
    r_squared: float | None
    ic: float | None
    n: int

    @classmethod
    def compute(cls, targets, outputs, prev_target: float | None = None) -> "MetricBundle":
        """Bundle all metrics; ic is absent when prev_target is not supplied
        or the actual series is constant."""
        t, o = _check_pair(targets, outputs)
        h = hit_rate(t, o)
        es = error_stats(t, o)
        ic = None
        if prev_target is not None:
            try:
                ic = info_coefficient(t, o, prev_target)
            except DataError:
                ic = None
        return cls(h, es.rmse, es.mse, es.mae, es.sse, es.r, es.r_squared, ic, len(t))

    def to_dict(self) -> dict:
        return {
            "hit_rate": self.hit_rate,
            "rmse": self.rmse,
            "mse": self.mse,
            "mae": self.mae,
            "sse": self.sse,
            "r": self.r,
            "r_squared": self.r_squared,
            "ic": self.ic,
            "n": self.n,
        }


def format_bundle(bundle: MetricBundle) -> dict[str, str]:
    """Table-style formatting: hit rate as a percentage with 4 decimals,
    error metrics with 4 significant digits."""
    out = {"hit_rate_pct": f"{bundle.hit_rate * 100.0:.4f}"}
    for name in ("rmse", "mse", "mae", "sse", "r", "r_squared", "ic"):
        v = getattr(bundle, name)
        out[name] = "" if v is None else f"{v:.4g}"
    out["n"] = str(bundle.n)
    return out
