"""Price series storage: CSV loading, alignment, chronological splitting,
and synthetic series generation for hermetic tests.

A PriceSeries is one dated daily closing-price sequence. An AlignedPanel
joins several series on their common dates and optionally carries the
train/test boundary as a row index.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .errors import DataError

logger = logging.getLogger(__name__)

SYNTHETIC_KINDS = ("sine+noise", "ar1", "random-walk")

_EPOCH = date(1996, 9, 3)


@dataclass(frozen=True)
class PriceSeries:
    """One daily closing-price series.

    Dates are strictly increasing calendar dates; values are finite and
    positive, one per date.
    """

    id: str
    dates: tuple[date, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != len(values):
            raise DataError(
                f"series {self.id!r}: {len(self.dates)} dates vs {len(values)} values"
            )
        if len(values) == 0:
            raise DataError(f"series {self.id!r}: empty")
        for a, b in zip(self.dates, self.dates[1:]):
            if a >= b:
                raise DataError(f"series {self.id!r}: dates not strictly increasing at {b}")
        if not np.all(np.isfinite(values)):
            raise DataError(f"series {self.id!r}: non-finite values")
        if np.any(values <= 0.0):
            raise DataError(f"series {self.id!r}: non-positive prices")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AlignedPanel:
    """Several series joined on a common date axis.

    split_index, when set, is the first out-of-sample row; rows before it
    are training data.
    """

    dates: tuple[date, ...]
    columns: dict[str, np.ndarray]
    split_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        cols = {}
        for sid, vals in self.columns.items():
            arr = np.asarray(vals, dtype=np.float64)
            arr.setflags(write=False)
            if len(arr) != len(self.dates):
                raise DataError(f"panel column {sid!r}: length {len(arr)} != {len(self.dates)}")
            cols[sid] = arr
        object.__setattr__(self, "columns", cols)
        if self.split_index is not None:
            if not 0 < self.split_index < len(self.dates):
                raise DataError(
                    f"split_index {self.split_index} out of range for {len(self.dates)} rows"
                )

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def series_ids(self) -> tuple[str, ...]:
        return tuple(self.columns)

    def column(self, sid: str) -> np.ndarray:
        if sid not in self.columns:
            raise DataError(f"panel has no series {sid!r} (have {sorted(self.columns)})")
        return self.columns[sid]


@dataclass(frozen=True)
class LoadReport:
    """Row accounting for one CSV load."""

    path: str
    rows_read: int
    rows_used: int
    dropped_unparseable: int
    dropped_nonpositive: int

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "rows_read": self.rows_read,
            "rows_used": self.rows_used,
            "dropped_unparseable": self.dropped_unparseable,
            "dropped_nonpositive": self.dropped_nonpositive,
        }


def _parse_date(text: str) -> date | None:
    text = text.strip()
    try:
        return date.fromisoformat(text)
    except ValueError:
        pass
    # EIA-style US format
    parts = text.split("/")
    if len(parts) == 3:
        try:
            m, d, y = (int(p) for p in parts)
            return date(y, m, d)
        except ValueError:
            return None
    return None


def load_csv_with_report(
    path: str | Path,
    date_column: str = "Date",
    price_column: str = "Price",
    series_id: str | None = None,
) -> tuple[PriceSeries, LoadReport]:
    """Load one series from a CSV with a header row.

    Dates may be ISO-8601 or MM/DD/YYYY. Rows whose date or price does not
    parse, or whose price is not positive, are dropped and counted in the
    returned LoadReport. Rows come back sorted ascending by date.
    """
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such file: {p}")
    sid = series_id if series_id is not None else p.stem

    rows_read = 0
    bad_parse = 0
    bad_value = 0
    parsed: list[tuple[date, float]] = []
    with p.open("r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in (date_column, price_column) if c not in header]
        if missing:
            raise DataError(f"{p}: missing column(s) {missing}, header is {header}")
        for row in reader:
            rows_read += 1
            d = _parse_date(row[date_column] or "")
            if d is None:
                bad_parse += 1
                continue
            try:
                v = float(row[price_column])
            except (TypeError, ValueError):
                bad_parse += 1
                continue
            if not np.isfinite(v) or v <= 0.0:
                bad_value += 1
                continue
            parsed.append((d, v))

    if not parsed:
        raise DataError(f"{p}: zero usable rows (read {rows_read})")
    parsed.sort(key=lambda t: t[0])
    dates = tuple(d for d, _ in parsed)
    values = np.array([v for _, v in parsed])
    report = LoadReport(str(p), rows_read, len(parsed), bad_parse, bad_value)
    if report.dropped_unparseable or report.dropped_nonpositive:
        logger.info(
            "%s: dropped %d unparseable and %d non-positive rows",
            p, report.dropped_unparseable, report.dropped_nonpositive,
        )
    return PriceSeries(sid, dates, values), report


def load_csv(
    path: str | Path,
    date_column: str = "Date",
    price_column: str = "Price",
    series_id: str | None = None,
) -> PriceSeries:
    """load_csv_with_report without the report."""
    series, _ = load_csv_with_report(path, date_column, price_column, series_id)
    return series


def write_csv(series: PriceSeries, path: str | Path) -> None:
    """Write a series as Date,Price with full-precision values, so that
    load_csv(write_csv(s)) reproduces s exactly."""
    p = Path(path)
    with p.open("w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        w.writerow(["Date", "Price"])
        for d, v in zip(series.dates, series.values):
            w.writerow([d.isoformat(), repr(float(v))])


def align(series_list: list[PriceSeries]) -> AlignedPanel:
    """Join series on the intersection of their dates.

    Rows where any series is missing are dropped by construction. The
    returned panel has no split_index.
    """
    if not series_list:
        raise DataError("align needs at least one series")
    ids = [s.id for s in series_list]
    if len(set(ids)) != len(ids):
        raise DataError(f"duplicate series ids: {ids}")

    common = set(series_list[0].dates)
    for s in series_list[1:]:
        common &= set(s.dates)
    if not common:
        raise DataError(f"no common dates across series {ids}")
    axis = tuple(sorted(common))

    columns: dict[str, np.ndarray] = {}
    for s in series_list:
        lookup = dict(zip(s.dates, s.values))
        columns[s.id] = np.array([lookup[d] for d in axis])
    return AlignedPanel(axis, columns)


def split_chrono(panel: AlignedPanel, train_fraction: float) -> AlignedPanel:
    """Mark the chronological train/test boundary at
    floor(train_fraction * rows). No shuffling; every out-of-sample row is
    strictly later than every training row."""
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0,1), got {train_fraction}")
    idx = int(np.floor(train_fraction * len(panel)))
    if idx <= 0 or idx >= len(panel):
        raise DataError(
            f"split of {len(panel)} rows at fraction {train_fraction} leaves an empty side"
        )
    return replace(panel, split_index=idx)


def export_panel_csv(panel: AlignedPanel, path: str | Path) -> None:
    """Write the panel as Date plus one full-precision column per series."""
    p = Path(path)
    with p.open("w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        w.writerow(["Date", *panel.series_ids])
        for i, d in enumerate(panel.dates):
            w.writerow([d.isoformat(), *(repr(float(panel.columns[sid][i])) for sid in panel.series_ids)])


def gen_synthetic(
    kind: str,
    params: dict | None,
    length: int,
    seed: int,
    series_id: str | None = None,
) -> PriceSeries:
    """Generate a deterministic synthetic price series.

    kinds:
      sine+noise   params: period=250, amplitude=10, noise=1, base=100
      ar1          params: phi (required), sigma=1, c=0, base=0
      random-walk  params: sigma=1, drift=0, start=100

    The AR(1) recursion is x_t = c + phi * x_{t-1} + sigma * eps_t with a
    stationary start; |phi| >= 1 is rejected. All kinds are shifted up if
    needed so every value is positive.
    """
    if length < 2:
        raise DataError(f"synthetic length must be >= 2, got {length}")
    if kind not in SYNTHETIC_KINDS:
        raise DataError(f"unknown synthetic kind {kind!r}, expected one of {SYNTHETIC_KINDS}")
    params = dict(params or {})
    rng = np.random.default_rng(seed)

    if kind == "sine+noise":
        period = float(params.pop("period", 250))
        amplitude = float(params.pop("amplitude", 10.0))
        noise = float(params.pop("noise", 1.0))
        base = float(params.pop("base", 100.0))
        t = np.arange(length, dtype=np.float64)
        x = base + amplitude * np.sin(2.0 * np.pi * t / period)
        if noise != 0.0:
            x = x + noise * rng.standard_normal(length)
    elif kind == "ar1":
        phi = float(params.pop("phi"))
        if abs(phi) >= 1.0:
            raise DataError(f"ar1 requires |phi| < 1 for stationarity, got {phi}")
        sigma = float(params.pop("sigma", 1.0))
        c = float(params.pop("c", 0.0))
        base = float(params.pop("base", 0.0))
        mean = c / (1.0 - phi)
        x = np.empty(length)
        x[0] = mean + sigma / np.sqrt(1.0 - phi * phi) * rng.standard_normal()
        eps = rng.standard_normal(length - 1)
        for i in range(1, length):
            x[i] = c + phi * x[i - 1] + sigma * eps[i - 1]
        x = x + base
    else:  # random-walk
        sigma = float(params.pop("sigma", 1.0))
        drift = float(params.pop("drift", 0.0))
        start = float(params.pop("start", 100.0))
        steps = drift + sigma * rng.standard_normal(length - 1)
        x = start + np.concatenate(([0.0], np.cumsum(steps)))

    if params:
        raise DataError(f"unknown synthetic params for {kind!r}: {sorted(params)}")
    lo = x.min()
    if lo <= 0.0:
        x = x + (1.0 - lo)

    sid = series_id if series_id is not None else f"synthetic-{kind}"
    dates = tuple(_EPOCH + timedelta(days=i) for i in range(length))
    return PriceSeries(sid, dates, x)


def gen_linked_set(
    length: int,
    seed: int,
    contract_ids: tuple[str, ...] = ("fut1", "fut2", "fut3", "fut4"),
    phi: float = 0.95,
    sigma: float = 1.0,
    base: float = 100.0,
    contract_noise: float = 0.3,
) -> list[PriceSeries]:
    """Spot plus futures-like companions for hermetic fixtures.

    A latent AR(1) drives everything; each contract sees the latent value
    one step ahead plus idiosyncratic noise, which gives augmentation
    experiments something real to find.
    """
    rng = np.random.default_rng(seed)
    latent_len = length + 1
    latent = np.empty(latent_len)
    latent[0] = sigma / np.sqrt(1.0 - phi * phi) * rng.standard_normal()
    eps = rng.standard_normal(latent_len - 1)
    for i in range(1, latent_len):
        latent[i] = phi * latent[i - 1] + sigma * eps[i - 1]

    def as_series(sid: str, x: np.ndarray) -> PriceSeries:
        x = x + base
        lo = x.min()
        if lo <= 0.0:
            x = x + (1.0 - lo)
        dates = tuple(_EPOCH + timedelta(days=i) for i in range(length))
        return PriceSeries(sid, dates, x)

    out = [as_series("spot", latent[:length].copy())]
    for k, cid in enumerate(contract_ids):
        noise = contract_noise * (1.0 + 0.25 * k) * rng.standard_normal(length)
        out.append(as_series(cid, latent[1 : length + 1] + noise))
    return out
