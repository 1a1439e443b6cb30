"""Lagged design matrices with exact causal alignment.

All sources must come from one date axis of length T: a transformed series
with origin_offset o places its value i at axis position i + o. A design
row "as of" axis position t packs, for each feature, the source values at
t, t-1, ..., t-L+1, and targets the series value at t+h for each horizon h.
Rows exist exactly where every lag and every horizon value exists.

The train/test boundary is applied to target dates: a row is training only
if all of its targets fall before the panel split, so no training target
lies in the test period.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import DataError
from .transform import TransformedSeries


@dataclass(frozen=True)
class FeatureSpec:
    """One source series contributing `lags` columns (values at t .. t-lags+1)."""

    source: TransformedSeries
    lags: int
    name: str = "x"

    def __post_init__(self):
        if self.lags < 1:
            raise DataError(f"lags must be >= 1, got {self.lags}")

    @property
    def reach(self) -> int:
        # Earliest axis position a row needs from this source.
        return self.source.origin_offset + self.lags - 1


@dataclass(frozen=True)
class SupervisedSet:
    """Design matrix plus targets, row metadata, and the inputs needed to
    rebuild the set (used by append_features)."""

    X: np.ndarray                       # (rows, total lags)
    y: np.ndarray                       # (rows, len(horizons))
    horizons: tuple[int, ...]
    t_start: int                        # axis position of row 0
    column_names: tuple[str, ...]
    row_dates: tuple[date, ...] | None
    split_index: int | None             # first out-of-sample row
    features: tuple[FeatureSpec, ...]
    target: TransformedSeries
    axis_dates: tuple[date, ...] | None
    axis_split: int | None

    def __post_init__(self):
        for name in ("X", "y"):
            getattr(self, name).setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_columns(self) -> int:
        return self.X.shape[1]

    def for_horizon(self, index: int) -> "SupervisedSet":
        """Single-horizon view sharing this set's rows and split."""
        if not 0 <= index < len(self.horizons):
            raise DataError(f"horizon index {index} out of range {self.horizons}")
        return SupervisedSet(
            self.X, self.y[:, index : index + 1], (self.horizons[index],),
            self.t_start, self.column_names, self.row_dates, self.split_index,
            self.features, self.target, self.axis_dates, self.axis_split,
        )

    def train_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.split_index is None:
            raise DataError("set has no train/test split")
        return self.X[: self.split_index], self.y[: self.split_index]

    def test_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.split_index is None:
            raise DataError("set has no train/test split")
        return self.X[self.split_index :], self.y[self.split_index :]


def _axis_length(sources: list[TransformedSeries]) -> int:
    lengths = {len(s) + s.origin_offset for s in sources}
    if len(lengths) != 1:
        raise DataError(f"sources disagree on date-axis length: {sorted(lengths)}")
    return lengths.pop()


def build_design(
    features: list[FeatureSpec] | tuple[FeatureSpec, ...],
    target: TransformedSeries,
    horizons: tuple[int, ...] | list[int] = (1,),
    dates: tuple[date, ...] | None = None,
    split_index: int | None = None,
) -> SupervisedSet:
    """Assemble the lagged design matrix and horizon-shifted targets.

    dates/split_index describe the shared axis (the panel); both optional.
    All horizons share one row axis trimmed to the largest horizon so that
    per-horizon results are computed on identical rows.
    """
    features = tuple(features)
    horizons = tuple(int(h) for h in horizons)
    if not features:
        raise DataError("no features")
    if not horizons or any(h < 1 for h in horizons) or list(horizons) != sorted(set(horizons)):
        raise DataError(f"horizons must be strictly increasing positive integers, got {horizons}")

    T = _axis_length([f.source for f in features] + [target])
    if dates is not None and len(dates) != T:
        raise DataError(f"dates length {len(dates)} != axis length {T}")

    o_tgt = target.origin_offset
    max_h = max(horizons)
    t_min = max(max(f.reach for f in features), o_tgt - min(horizons))
    t_max = T - 1 - max_h
    n_rows = t_max - t_min + 1
    if n_rows <= 0:
        raise DataError(
            f"zero usable rows: axis length {T}, lag reach {max(f.reach for f in features)}, "
            f"max horizon {max_h}"
        )

    t = np.arange(t_min, t_max + 1)
    blocks = []
    names = []
    for f in features:
        idx = t[:, None] - np.arange(f.lags)[None, :] - f.source.origin_offset
        blocks.append(f.source.values[idx])
        names.extend(f"{f.name}_lag{j}" for j in range(f.lags))
    X = np.concatenate(blocks, axis=1)
    y = np.stack([target.values[t + h - o_tgt] for h in horizons], axis=1)

    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("design contains non-finite values")

    row_split = None
    if split_index is not None:
        # training rows need every target date before the panel split
        row_split = int(np.clip(split_index - max_h - t_min, 0, n_rows))
    row_dates = tuple(dates[i] for i in t) if dates is not None else None

    return SupervisedSet(
        X, y, horizons, t_min, tuple(names), row_dates, row_split,
        features, target, tuple(dates) if dates is not None else None, split_index,
    )


def append_features(base: SupervisedSet, extra: list[FeatureSpec]) -> SupervisedSet:
    """Rebuild with extra feature columns on the right; rows re-trim to the
    intersection of validity and targets are unchanged on surviving rows."""
    return build_design(
        base.features + tuple(extra),
        base.target,
        base.horizons,
        dates=base.axis_dates,
        split_index=base.axis_split,
    )
