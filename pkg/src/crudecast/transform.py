"""Preprocessing transforms with exact origin bookkeeping.

Every operation consumes leading points of its input; origin_offset tracks
how many, so index i of a transformed series always maps back to source
index i + origin_offset. The recipe records the applied steps and is
sufficient to re-derive the values bit-for-bit via apply_recipe.

Transforms:
  moving_average  trailing mean over `window` points
  momentum        y_t = (x_t - x_{t-n}) / x_{t-n}         (first-order relative change)
  force           y_t = (x_t - 2 x_{t-n} + x_{t-2n}) / x_{t-n}  (second-order relative change)
  minmax          y = 2 (x - min) / (max - min) - 1, fit on a designated range
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DataError

# Relative-change denominators this small are treated as zero.
DENOM_GUARD = 1e-9

ArrayLike = Union[np.ndarray, list, tuple, "TransformedSeries"]


@dataclass(frozen=True)
class RecipeStep:
    op: str
    params: dict

    def to_dict(self) -> dict:
        return {"op": self.op, **self.params}


@dataclass(frozen=True)
class TransformedSeries:
    """Values plus the offset and recipe that produced them."""

    values: np.ndarray
    origin_offset: int
    recipe: tuple[RecipeStep, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "recipe", tuple(self.recipe))

    def __len__(self) -> int:
        return len(self.values)


def _unwrap(x: ArrayLike) -> tuple[np.ndarray, int, tuple[RecipeStep, ...]]:
    if isinstance(x, TransformedSeries):
        return x.values, x.origin_offset, x.recipe
    return np.asarray(x, dtype=np.float64), 0, ()


def moving_average(x: ArrayLike, window: int) -> TransformedSeries:
    """Trailing simple moving average; out_t = mean(x_{t-window+1..t})."""
    values, offset, recipe = _unwrap(x)
    if window < 1:
        raise DataError(f"moving_average window must be >= 1, got {window}")
    if len(values) < window:
        raise DataError(f"series of length {len(values)} shorter than window {window}")
    csum = np.concatenate(([0.0], np.cumsum(values)))
    out = (csum[window:] - csum[:-window]) / float(window)
    return TransformedSeries(
        out, offset + window - 1, recipe + (RecipeStep("moving_average", {"window": window}),)
    )


def momentum(x: ArrayLike, n: int) -> TransformedSeries:
    """First-order relative change at horizon n."""
    values, offset, recipe = _unwrap(x)
    if n < 1:
        raise DataError(f"momentum horizon must be >= 1, got {n}")
    if len(values) <= n:
        raise DataError(f"series of length {len(values)} too short for momentum n={n}")
    denom = values[:-n]
    if np.any(np.abs(denom) < DENOM_GUARD):
        raise DataError("momentum denominator within 1e-9 of zero")
    out = (values[n:] - denom) / denom
    return TransformedSeries(out, offset + n, recipe + (RecipeStep("momentum", {"n": n}),))


def force(x: ArrayLike, n: int) -> TransformedSeries:
    """Second-order relative change at horizon n."""
    values, offset, recipe = _unwrap(x)
    if n < 1:
        raise DataError(f"force horizon must be >= 1, got {n}")
    if len(values) <= 2 * n:
        raise DataError(f"series of length {len(values)} too short for force n={n}")
    denom = values[n:-n]
    if np.any(np.abs(denom) < DENOM_GUARD):
        raise DataError("force denominator within 1e-9 of zero")
    out = (values[2 * n :] - 2.0 * denom + values[: -2 * n]) / denom
    return TransformedSeries(out, offset + 2 * n, recipe + (RecipeStep("force", {"n": n}),))


@dataclass(frozen=True)
class ScaleParams:
    """Min/max estimated on a designated fit range."""

    min_val: float
    max_val: float

    def __post_init__(self):
        if not self.max_val > self.min_val:
            raise DataError(
                f"degenerate scale range: min {self.min_val} >= max {self.max_val}"
            )


def minmax_fit(x: ArrayLike, fit_range: tuple[int, int] | None = None) -> ScaleParams:
    """Estimate min/max over fit_range (start, stop); None means the whole series."""
    values, _, _ = _unwrap(x)
    if fit_range is None:
        fit_range = (0, len(values))
    start, stop = fit_range
    segment = values[start:stop]
    if len(segment) == 0:
        raise DataError(f"empty fit range {fit_range}")
    lo, hi = float(segment.min()), float(segment.max())
    if hi == lo:
        raise DataError(f"constant series over fit range {fit_range}: cannot scale")
    return ScaleParams(lo, hi)


def minmax_apply(x: ArrayLike, p: ScaleParams) -> np.ndarray:
    """Map to [-1, 1] on the fit range; values outside the range map outside [-1, 1]."""
    values, _, _ = _unwrap(x)
    return 2.0 * (values - p.min_val) / (p.max_val - p.min_val) - 1.0


def minmax_invert(y: ArrayLike, p: ScaleParams) -> np.ndarray:
    """Exact inverse of minmax_apply."""
    values, _, _ = _unwrap(y)
    return (values + 1.0) * 0.5 * (p.max_val - p.min_val) + p.min_val


def normalize(ts: TransformedSeries, p: ScaleParams) -> TransformedSeries:
    """minmax_apply with recipe bookkeeping (offset unchanged)."""
    step = RecipeStep("minmax", {"min_val": p.min_val, "max_val": p.max_val})
    return TransformedSeries(minmax_apply(ts.values, p), ts.origin_offset, ts.recipe + (step,))


def apply_recipe(source: ArrayLike, recipe: tuple[RecipeStep, ...]) -> TransformedSeries:
    """Re-derive a transformed series from its source and recipe."""
    out: ArrayLike = TransformedSeries(np.asarray(source, dtype=np.float64), 0, ())
    for step in recipe:
        if step.op == "moving_average":
            out = moving_average(out, step.params["window"])
        elif step.op == "momentum":
            out = momentum(out, step.params["n"])
        elif step.op == "force":
            out = force(out, step.params["n"])
        elif step.op == "minmax":
            out = normalize(out, ScaleParams(step.params["min_val"], step.params["max_val"]))
        else:
            raise DataError(f"unknown recipe step {step.op!r}")
    return out
