"""Experiment orchestration: lag sweeps, the spot-only benchmark, futures
contracts solo and added to the benchmark, and multi-step forecasts.

Every run is a pure function of (config, seed list): series are either
loaded from CSV or generated from seeded synthetic specs, trial seeds are
seed, seed+1, ..., and report emission uses canonical formatting, so
re-running a config byte-reproduces its reports.

Pipeline per series: optional trailing moving average, then momentum or
force at horizon n, then minmax normalization fit on training rows only.
Metrics are computed back on the relative-change scale (normalization
inverted), where the sign of a value is the direction of change.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, SyntheticSeriesSpec, config_hash
from .errors import ConfigError, DataError, TrainingError
from .metrics import METRIC_FIELDS
from .network import Layout, Network
from .references import reference_for
from .series import AlignedPanel, align, gen_synthetic, load_csv, split_chrono
from .supervised import FeatureSpec, SupervisedSet, append_features, build_design
from .trainer import MultiTrialResult, TrainOptions, multi_trial
from .transform import ScaleParams, TransformedSeries, force, minmax_fit, momentum, moving_average, normalize

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("lag", "hit_in", "hit_out", "rmse_in", "rmse_out", "hit_out_std", "stable", "error")
MULTISTEP_COLUMNS = ("horizon", "hit_in", "hit_out", "rmse_in", "rmse_out", "hit_out_std", "stable")


# ---------------------------------------------------------------------------
# data assembly

def build_panel(cfg: ExperimentConfig) -> AlignedPanel:
    """Load or generate all configured series, align, and split."""
    series = []
    for sid, spec in cfg.data.series.items():
        if isinstance(spec, SyntheticSeriesSpec):
            series.append(gen_synthetic(spec.kind, spec.params, spec.length, spec.seed, series_id=sid))
        else:
            series.append(load_csv(spec.path, spec.date_column, spec.price_column, series_id=sid))
    panel = align(series)
    return split_chrono(panel, cfg.data.train_fraction)


@dataclass(frozen=True)
class PreparedSeries:
    """One series through the pipeline: normalized values for the network
    plus the raw transformed values and the scale to undo normalization."""

    normalized: TransformedSeries
    raw: TransformedSeries
    scale: ScaleParams | None           # None when the series is constant over the fit range


def prepare_series(
    panel: AlignedPanel,
    series_id: str,
    ma_window: int | None,
    kind: str,
    n: int,
) -> PreparedSeries:
    values = panel.column(series_id)
    ts: TransformedSeries | np.ndarray = values
    if ma_window is not None and ma_window > 1:
        ts = moving_average(ts, ma_window)
    ts = momentum(ts, n) if kind == "momentum" else force(ts, n)

    if panel.split_index is None:
        raise DataError("panel has no train/test split")
    fit_stop = panel.split_index - ts.origin_offset
    if fit_stop < 1:
        raise DataError(f"series {series_id!r}: no training rows left after transforms")
    try:
        scale = minmax_fit(ts.values, (0, fit_stop))
    except DataError:
        # A constant series carries no information; pass it through unscaled
        # instead of failing the whole run.
        logger.warning("series %r is constant over the training range; left unscaled", series_id)
        return PreparedSeries(ts, ts, None)
    return PreparedSeries(normalize(ts, scale), ts, scale)


def _ic_prev(raw_target: TransformedSeries, ds: SupervisedSet, horizon: int) -> tuple[float | None, float | None]:
    """Actual target value just before each evaluation segment, for the
    information coefficient's first denominator term."""
    def at(t_row: int) -> float | None:
        idx = t_row - 1 + horizon - raw_target.origin_offset
        if 0 <= idx < len(raw_target.values):
            return float(raw_target.values[idx])
        return None

    if ds.split_index is None:
        return None, None
    return at(ds.t_start), at(ds.t_start + ds.split_index)


@dataclass(frozen=True)
class DesignBundle:
    ds: SupervisedSet
    target: PreparedSeries
    recipe: tuple[tuple[str, str], ...]  # (transform kind, role name) per feature family


def benchmark_design(
    cfg: ExperimentConfig,
    panel: AlignedPanel,
    lags: int | None = None,
    horizons: tuple[int, ...] = (1,),
    extra_contracts: tuple[str, ...] = (),
    extra_lags: int | None = None,
) -> DesignBundle:
    """Design for the named benchmark pipeline, optionally with futures
    contracts appended as additional inputs in the same transformation.

    ma_momentum: `lags` of (moving average -> momentum) of the target
    series, same series as target. momentum_force: `lags` each of momentum
    and force of the raw series, force as target.
    """
    run = cfg.run
    lags = run.lags if lags is None else lags
    spot = run.target_series
    if run.benchmark == "ma_momentum":
        prepared = prepare_series(panel, spot, cfg.pipeline.ma_window, "momentum", cfg.pipeline.n)
        features = [FeatureSpec(prepared.normalized, lags, name=f"{spot}_mom")]
        target = prepared
        families = [("momentum", "mom")]
    else:  # momentum_force
        mom = prepare_series(panel, spot, None, "momentum", cfg.pipeline.n)
        frc = prepare_series(panel, spot, None, "force", cfg.pipeline.n)
        features = [
            FeatureSpec(mom.normalized, lags, name=f"{spot}_mom"),
            FeatureSpec(frc.normalized, lags, name=f"{spot}_frc"),
        ]
        target = frc
        families = [("momentum", "mom"), ("force", "frc")]

    for cid in extra_contracts:
        n_lags = run.futures_lags if extra_lags is None else extra_lags
        for kind, tag in families:
            ma = cfg.pipeline.ma_window if run.benchmark == "ma_momentum" else None
            extra = prepare_series(panel, cid, ma, kind, cfg.pipeline.n)
            features.append(FeatureSpec(extra.normalized, n_lags, name=f"{cid}_{tag}"))

    ds = build_design(features, target.normalized, horizons, dates=panel.dates, split_index=panel.split_index)
    return DesignBundle(ds, target, tuple(families))


def _layout_for(cfg: ExperimentConfig, ds: SupervisedSet) -> Layout:
    return Layout(ds.n_columns, cfg.model.n_hidden, 1, cfg.model.hidden_activation)


def _run_trials(
    cfg: ExperimentConfig,
    bundle: DesignBundle,
    horizon_index: int = 0,
) -> MultiTrialResult:
    ds = bundle.ds.for_horizon(horizon_index)
    horizon = ds.horizons[0]
    prev = _ic_prev(bundle.target.raw, ds, horizon)
    return multi_trial(
        _layout_for(cfg, ds),
        ds,
        cfg.trainer,
        n_trials=cfg.run.n_trials,
        stability_threshold=cfg.run.stability_threshold,
        inverse_scale=bundle.target.scale,
        ic_prev=prev,
        jobs=cfg.run.jobs,
    )


def _seed_list(cfg: ExperimentConfig) -> list[int]:
    return [cfg.trainer.seed + k for k in range(cfg.run.n_trials)]


# ---------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class SweepRow:
    lag: int
    hit_in: float | None = None
    hit_out: float | None = None
    rmse_in: float | None = None
    rmse_out: float | None = None
    hit_out_std: float | None = None
    stable: bool | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    kind: str                           # "sweep" | "futures_solo"
    name: str
    input_series: str
    target_series: str
    pipeline: dict
    rows: tuple[SweepRow, ...]
    seeds: tuple[int, ...]
    config_hash: str
    reference: dict | None = None

    @property
    def best_stable_lag(self) -> int | None:
        candidates = [r for r in self.rows if r.error is None and r.stable and r.hit_out is not None]
        if not candidates:
            return None
        return max(candidates, key=lambda r: (r.hit_out, -r.lag)).lag

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "input_series": self.input_series,
            "target_series": self.target_series,
            "pipeline": self.pipeline,
            "rows": [vars(r).copy() for r in self.rows],
            "best_stable_lag": self.best_stable_lag,
            "seeds": list(self.seeds),
            "config_hash": self.config_hash,
            "reference": self.reference,
        }

    def to_csv_rows(self) -> list[list[str]]:
        out = [list(SWEEP_COLUMNS)]
        for r in self.rows:
            out.append([
                str(r.lag), _num(r.hit_in), _num(r.hit_out), _num(r.rmse_in), _num(r.rmse_out),
                _num(r.hit_out_std), _flag(r.stable), r.error or "",
            ])
        return out


@dataclass(frozen=True)
class BenchmarkResult:
    kind: str
    name: str
    pipeline_name: str
    lags: int
    mean_in: dict
    std_in: dict
    mean_out: dict
    std_out: dict
    stable: bool
    per_trial: tuple[dict, ...]
    best_trial_index: int
    seeds: tuple[int, ...]
    config_hash: str
    reference: dict | None = None
    best_network: Network | None = field(default=None, compare=False)
    loss_curves: tuple[np.ndarray, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "pipeline_name": self.pipeline_name,
            "lags": self.lags,
            "mean_in": self.mean_in,
            "std_in": self.std_in,
            "mean_out": self.mean_out,
            "std_out": self.std_out,
            "stable": self.stable,
            "per_trial": list(self.per_trial),
            "best_trial_index": self.best_trial_index,
            "seeds": list(self.seeds),
            "config_hash": self.config_hash,
            "reference": self.reference,
        }

    def to_csv_rows(self) -> list[list[str]]:
        names = list(METRIC_FIELDS)
        out = [["segment", "statistic", *names]]
        for segment, stats in (("in", (self.mean_in, self.std_in)), ("out", (self.mean_out, self.std_out))):
            for label, d in zip(("mean", "std"), stats):
                out.append([segment, label, *(_num(d[n]) for n in names)])
        return out


@dataclass(frozen=True)
class MultistepRow:
    horizon: int
    hit_in: float | None
    hit_out: float | None
    rmse_in: float | None
    rmse_out: float | None
    hit_out_std: float | None
    stable: bool | None


@dataclass(frozen=True)
class MultistepResult:
    kind: str
    name: str
    futures_contract: str | None
    lags: int
    lags_note: str
    rows: tuple[MultistepRow, ...]
    seeds: tuple[int, ...]
    config_hash: str
    reference: dict | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "futures_contract": self.futures_contract,
            "lags": self.lags,
            "lags_note": self.lags_note,
            "rows": [vars(r).copy() for r in self.rows],
            "seeds": list(self.seeds),
            "config_hash": self.config_hash,
            "reference": self.reference,
        }

    def to_csv_rows(self) -> list[list[str]]:
        out = [list(MULTISTEP_COLUMNS)]
        for r in self.rows:
            out.append([
                str(r.horizon), _num(r.hit_in), _num(r.hit_out), _num(r.rmse_in), _num(r.rmse_out),
                _num(r.hit_out_std), _flag(r.stable),
            ])
        return out


@dataclass(frozen=True)
class AugmentResult:
    kind: str
    name: str
    contracts: tuple[str, ...]
    futures_lags: int
    n_columns_base: int
    n_columns_augmented: int
    benchmark_in: dict
    benchmark_out: dict
    augmented_in: dict
    augmented_out: dict
    delta_in: dict
    delta_out: dict
    stable: bool
    seeds: tuple[int, ...]
    config_hash: str
    reference: dict | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "contracts": list(self.contracts),
            "futures_lags": self.futures_lags,
            "n_columns_base": self.n_columns_base,
            "n_columns_augmented": self.n_columns_augmented,
            "benchmark_in": self.benchmark_in,
            "benchmark_out": self.benchmark_out,
            "augmented_in": self.augmented_in,
            "augmented_out": self.augmented_out,
            "delta_in": self.delta_in,
            "delta_out": self.delta_out,
            "stable": self.stable,
            "seeds": list(self.seeds),
            "config_hash": self.config_hash,
            "reference": self.reference,
        }

    def to_csv_rows(self) -> list[list[str]]:
        names = list(METRIC_FIELDS)
        out = [["segment", "variant", *names]]
        for segment, triple in (
            ("in", (("benchmark", self.benchmark_in), ("augmented", self.augmented_in), ("delta", self.delta_in))),
            ("out", (("benchmark", self.benchmark_out), ("augmented", self.augmented_out), ("delta", self.delta_out))),
        ):
            for label, d in triple:
                out.append([segment, label, *(_num(d.get(n)) for n in names)])
        return out


def _num(v) -> str:
    return "" if v is None else repr(float(v))


def _flag(v) -> str:
    return "" if v is None else ("true" if v else "false")


# ---------------------------------------------------------------------------
# runs

def run_lag_sweep(
    cfg: ExperimentConfig,
    lag_range: tuple[int, ...] | list[int] | None = None,
    input_series: str | None = None,
) -> SweepResult:
    """Train the configured pipeline at each lag count and tabulate averaged
    hit rates and RMSE. A failed row records its reason; the sweep goes on."""
    lag_range = tuple(lag_range if lag_range is not None else cfg.run.lag_range)
    if not lag_range:
        raise ConfigError("empty lag range")
    sid = input_series if input_series is not None else cfg.run.input_series
    panel = build_panel(cfg)
    feat = prepare_series(panel, sid, cfg.pipeline.ma_window, cfg.pipeline.transform, cfg.pipeline.n)
    tgt = feat if sid == cfg.run.target_series else prepare_series(
        panel, cfg.run.target_series, cfg.pipeline.ma_window, cfg.pipeline.transform, cfg.pipeline.n
    )

    rows = []
    for lag in sorted(lag_range):
        try:
            ds = build_design(
                [FeatureSpec(feat.normalized, lag, name=sid)],
                tgt.normalized,
                (1,),
                dates=panel.dates,
                split_index=panel.split_index,
            )
            bundle = DesignBundle(ds, tgt, ((cfg.pipeline.transform, sid),))
            mt = _run_trials(cfg, bundle)
            rows.append(SweepRow(
                lag,
                hit_in=mt.mean_in["hit_rate"], hit_out=mt.mean_out["hit_rate"],
                rmse_in=mt.mean_in["rmse"], rmse_out=mt.mean_out["rmse"],
                hit_out_std=mt.std_out["hit_rate"], stable=mt.stable,
            ))
        except (DataError, TrainingError) as e:
            logger.warning("lag %d failed: %s", lag, e)
            rows.append(SweepRow(lag, error=str(e)))

    solo = sid != cfg.run.target_series
    if solo:
        reference = reference_for("futures_solo", sid)
    else:
        reference = reference_for("sweep", cfg.run.benchmark if cfg.pipeline.ma_window else None)
    return SweepResult(
        kind="futures_solo" if solo else "sweep",
        name=f"{cfg.name}_{'solo_' + sid if solo else 'sweep'}",
        input_series=sid,
        target_series=cfg.run.target_series,
        pipeline=cfg.pipeline.to_dict(),
        rows=tuple(rows),
        seeds=tuple(_seed_list(cfg)),
        config_hash=config_hash(cfg),
        reference=reference,
    )


def run_benchmark(cfg: ExperimentConfig) -> BenchmarkResult:
    """Train the named benchmark pipeline, keeping the best-by-out-of-sample
    network and averaged metrics with full provenance."""
    panel = build_panel(cfg)
    bundle = benchmark_design(cfg, panel)
    mt = _run_trials(cfg, bundle)
    if not mt.stable:
        logger.warning(
            "benchmark is not stable: out-of-sample hit-rate std %.4f exceeds %.4f",
            mt.std_out["hit_rate"], cfg.run.stability_threshold,
        )
    per_trial = tuple(
        {
            "trial": t.index,
            "seed": t.seed,
            "iterations": t.report.iterations_used,
            "stop_reason": t.report.stop_reason,
            "final_sse": float(t.report.loss_curve[-1]),
            "in": t.metrics_in.to_dict(),
            "out": t.metrics_out.to_dict(),
        }
        for t in mt.trials
    )
    return BenchmarkResult(
        kind="benchmark",
        name=f"{cfg.name}_benchmark",
        pipeline_name=cfg.run.benchmark,
        lags=cfg.run.lags,
        mean_in=mt.mean_in, std_in=mt.std_in, mean_out=mt.mean_out, std_out=mt.std_out,
        stable=mt.stable,
        per_trial=per_trial,
        best_trial_index=mt.best_index,
        seeds=tuple(_seed_list(cfg)),
        config_hash=config_hash(cfg),
        reference=reference_for("benchmark", cfg.run.benchmark),
        best_network=mt.best.report.final_net,
        loss_curves=tuple(t.report.loss_curve for t in mt.trials),
    )


def run_futures_solo(cfg: ExperimentConfig, contract_id: str) -> SweepResult:
    """Lag sweep with a futures contract as the input series; the target
    stays the transformed spot series."""
    return run_lag_sweep(cfg, input_series=contract_id)


def run_futures_augmented(cfg: ExperimentConfig, contracts: tuple[str, ...] | list[str]) -> AugmentResult:
    """Benchmark design plus appended futures features, reported side by
    side with the plain benchmark. An empty contract set reproduces the
    benchmark result exactly."""
    contracts = tuple(contracts)
    panel = build_panel(cfg)
    base = benchmark_design(cfg, panel)
    mt_base = _run_trials(cfg, base)

    if contracts:
        extra = []
        ma = cfg.pipeline.ma_window if cfg.run.benchmark == "ma_momentum" else None
        for cid in contracts:
            for kind, tag in base.recipe:
                prepared = prepare_series(panel, cid, ma, kind, cfg.pipeline.n)
                extra.append(FeatureSpec(prepared.normalized, cfg.run.futures_lags, name=f"{cid}_{tag}"))
        ds_aug = append_features(base.ds, extra)
        bundle_aug = DesignBundle(ds_aug, base.target, base.recipe)
        mt_aug = _run_trials(cfg, bundle_aug)
    else:
        ds_aug = base.ds
        mt_aug = mt_base

    def delta(a: dict, b: dict) -> dict:
        return {
            k: (None if a.get(k) is None or b.get(k) is None else a[k] - b[k])
            for k in METRIC_FIELDS
        }

    detail = contracts[0] if len(contracts) == 1 else None
    return AugmentResult(
        kind="futures_augmented",
        name=f"{cfg.name}_augmented_{'_'.join(contracts) if contracts else 'none'}",
        contracts=contracts,
        futures_lags=cfg.run.futures_lags,
        n_columns_base=base.ds.n_columns,
        n_columns_augmented=ds_aug.n_columns,
        benchmark_in=mt_base.mean_in, benchmark_out=mt_base.mean_out,
        augmented_in=mt_aug.mean_in, augmented_out=mt_aug.mean_out,
        delta_in=delta(mt_aug.mean_in, mt_base.mean_in),
        delta_out=delta(mt_aug.mean_out, mt_base.mean_out),
        stable=mt_aug.stable,
        seeds=tuple(_seed_list(cfg)),
        config_hash=config_hash(cfg),
        reference=reference_for("futures_augmented", detail),
    )


def run_multistep(
    cfg: ExperimentConfig,
    horizons: tuple[int, ...] = (1, 2, 3),
    futures_contract: str | None = None,
) -> MultistepResult:
    """One independently trained network per horizon on a shared row axis
    (direct strategy); optionally adds futures lags to the inputs."""
    horizons = tuple(sorted(set(int(h) for h in horizons)))
    if not horizons or horizons[0] < 1:
        raise ConfigError(f"bad horizons {horizons}")
    panel = build_panel(cfg)
    extra = (futures_contract,) if futures_contract else ()
    bundle = benchmark_design(cfg, panel, horizons=horizons, extra_contracts=extra)

    rows = []
    for k, h in enumerate(horizons):
        mt = _run_trials(cfg, bundle, horizon_index=k)
        rows.append(MultistepRow(
            h,
            hit_in=mt.mean_in["hit_rate"], hit_out=mt.mean_out["hit_rate"],
            rmse_in=mt.mean_in["rmse"], rmse_out=mt.mean_out["rmse"],
            hit_out_std=mt.std_out["hit_rate"], stable=mt.stable,
        ))

    return MultistepResult(
        kind="multistep",
        name=f"{cfg.name}_multistep" + (f"_{futures_contract}" if futures_contract else ""),
        futures_contract=futures_contract,
        lags=cfg.run.lags,
        lags_note=(
            f"inputs use the {cfg.run.benchmark} benchmark configuration at {cfg.run.lags} lags "
            "for every horizon"
        ),
        rows=tuple(rows),
        seeds=tuple(_seed_list(cfg)),
        config_hash=config_hash(cfg),
        reference=reference_for("multistep", futures_contract),
    )


# ---------------------------------------------------------------------------
# report emission

def emit_report(result, fmt: str, path) -> None:
    """Write one result as CSV or JSON; byte-deterministic for fixed inputs.
    Both formats carry the config hash and seed list (the CSV as leading
    comment lines, which read_table_csv skips)."""
    p = Path(path)
    if fmt == "json":
        p.write_text(json.dumps(result.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    elif fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# config_hash {result.config_hash}\n")
        buf.write(f"# seeds {' '.join(str(s) for s in result.seeds)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerows(result.to_csv_rows())
        p.write_text(buf.getvalue(), encoding="utf-8")
    else:
        raise ConfigError(f"unknown report format {fmt!r}")


def read_table_csv(path) -> list[dict]:
    """Read back a table-style report CSV; numbers regain full precision."""
    rows = []
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        lines = (line for line in f if not line.startswith("#"))
        for row in csv.DictReader(lines):
            parsed = {}
            for k, v in row.items():
                if v == "":
                    parsed[k] = None
                elif v in ("true", "false"):
                    parsed[k] = v == "true"
                else:
                    try:
                        parsed[k] = int(v) if v.isdigit() or (v[0] == "-" and v[1:].isdigit()) else float(v)
                    except ValueError:
                        parsed[k] = v
            rows.append(parsed)
    return rows


def summary_lines(result) -> list[str]:
    """Human-readable summary in the reported tables' style: hit rates as
    percentages with 4 decimals, errors to 4 significant digits."""

    def pct(v):
        return "" if v is None else f"{100.0 * v:.4f}"

    def sig(v):
        return "" if v is None else f"{v:.4g}"

    lines = [result.name]
    if isinstance(result, SweepResult):
        lines.append("lag  hit_in%    hit_out%   rmse_in   rmse_out")
        for r in result.rows:
            if r.error is not None:
                lines.append(f"{r.lag:<4d} failed: {r.error}")
            else:
                flag = "" if r.stable else "  *unstable"
                lines.append(f"{r.lag:<4d} {pct(r.hit_in):<10} {pct(r.hit_out):<10} "
                             f"{sig(r.rmse_in):<9} {sig(r.rmse_out)}{flag}")
        lines.append(f"best stable lag: {result.best_stable_lag}")
    elif isinstance(result, BenchmarkResult):
        lines.append("segment  hit%       rmse      mse       mae")
        for seg, d in (("in", result.mean_in), ("out", result.mean_out)):
            lines.append(f"{seg:<8} {pct(d['hit_rate']):<10} {sig(d['rmse']):<9} "
                         f"{sig(d['mse']):<9} {sig(d['mae'])}")
        if not result.stable:
            lines.append("*not stable across trials")
    elif isinstance(result, MultistepResult):
        lines.append("horizon  hit_in%    hit_out%")
        for r in result.rows:
            lines.append(f"t+{r.horizon:<6d} {pct(r.hit_in):<10} {pct(r.hit_out)}")
        lines.append(result.lags_note)
    elif isinstance(result, AugmentResult):
        lines.append("segment  variant    hit%       rmse      mse       mae")
        for seg, pairs in (("in", (("bench", result.benchmark_in), ("+fut", result.augmented_in))),
                           ("out", (("bench", result.benchmark_out), ("+fut", result.augmented_out)))):
            for label, d in pairs:
                lines.append(f"{seg:<8} {label:<10} {pct(d['hit_rate']):<10} {sig(d['rmse']):<9} "
                             f"{sig(d['mse']):<9} {sig(d['mae'])}")
        lines.append(f"out-of-sample hit-rate delta: {pct(result.delta_out['hit_rate'])} points")
    return lines


RESULT_KINDS = {
    "sweep": SweepResult,
    "futures_solo": SweepResult,
    "benchmark": BenchmarkResult,
    "multistep": MultistepResult,
    "futures_augmented": AugmentResult,
}


def result_from_dict(doc: dict):
    """Rebuild a result object from its JSON dict (for the report verb)."""
    kind = doc.get("kind")
    if kind not in RESULT_KINDS:
        raise DataError(f"unknown result kind {kind!r}")
    if kind in ("sweep", "futures_solo"):
        rows = tuple(SweepRow(**r) for r in doc["rows"])
        return SweepResult(
            kind, doc["name"], doc["input_series"], doc["target_series"], doc["pipeline"],
            rows, tuple(doc["seeds"]), doc["config_hash"], doc.get("reference"),
        )
    if kind == "multistep":
        rows = tuple(MultistepRow(**r) for r in doc["rows"])
        return MultistepResult(
            kind, doc["name"], doc.get("futures_contract"), doc["lags"], doc["lags_note"],
            rows, tuple(doc["seeds"]), doc["config_hash"], doc.get("reference"),
        )
    if kind == "benchmark":
        return BenchmarkResult(
            kind, doc["name"], doc["pipeline_name"], doc["lags"],
            doc["mean_in"], doc["std_in"], doc["mean_out"], doc["std_out"], doc["stable"],
            tuple(doc["per_trial"]), doc["best_trial_index"], tuple(doc["seeds"]),
            doc["config_hash"], doc.get("reference"),
        )
    return AugmentResult(
        kind, doc["name"], tuple(doc["contracts"]), doc["futures_lags"],
        doc["n_columns_base"], doc["n_columns_augmented"],
        doc["benchmark_in"], doc["benchmark_out"], doc["augmented_in"], doc["augmented_out"],
        doc["delta_in"], doc["delta_out"], doc["stable"], tuple(doc["seeds"]),
        doc["config_hash"], doc.get("reference"),
    )
