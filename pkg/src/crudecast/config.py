"""Experiment configuration: one declarative YAML/JSON file covering data
sources, preprocessing, feature lags, model, trainer, and output knobs.

Sections and defaults:

  name: str
  data:
    source: synthetic | csv
    series:                    # id -> spec; synthetic and csv shapes differ
      spot: {kind: ar1, length: 2705, seed: 101, phi: 0.95, sigma: 1.0, base: 100}
      # or: spot: {path: spot.csv, date_column: Date, price_column: Price}
    train_fraction: 0.9
  pipeline:
    ma_window: 3               # null disables the moving-average filter
    transform: momentum        # momentum | force
    n: 1
  model:
    n_hidden: 8
    hidden_activation: tanh
  trainer:                     # TrainOptions fields
  run:
    benchmark: ma_momentum     # ma_momentum | momentum_force
    lags: 13
    lag_range: [1, ..., 20]
    horizons: [1]
    n_trials: 5
    seed: 1
    stability_threshold: 0.03
    futures_lags: 1
    input_series: spot
    target_series: spot
    jobs: 1
  output:
    dir: out
    formats: [csv, json]
    figures: true

CLI --set overrides use dotted paths into this structure, e.g.
trainer.max_iterations=200 or data.series.spot.seed=7.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path

import yaml

from .errors import ConfigError
from .series import SYNTHETIC_KINDS
from .trainer import TrainOptions

BENCHMARK_PIPELINES = ("ma_momentum", "momentum_force")
TRANSFORM_KINDS = ("momentum", "force")


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def _take(d: dict, path: str, known: tuple[str, ...]) -> None:
    unknown = sorted(set(d) - set(known))
    _require(not unknown, path, f"unknown key(s) {unknown}; known keys are {sorted(known)}")


@dataclass(frozen=True)
class SyntheticSeriesSpec:
    kind: str
    length: int
    seed: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "length": self.length, "seed": self.seed, **self.params}


@dataclass(frozen=True)
class CsvSeriesSpec:
    path: str
    date_column: str = "Date"
    price_column: str = "Price"

    def to_dict(self) -> dict:
        return {"path": self.path, "date_column": self.date_column, "price_column": self.price_column}


@dataclass(frozen=True)
class DataConfig:
    source: str
    series: dict
    train_fraction: float = 0.9

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "series": {sid: s.to_dict() for sid, s in self.series.items()},
            "train_fraction": self.train_fraction,
        }


@dataclass(frozen=True)
class PipelineConfig:
    ma_window: int | None = 3
    transform: str = "momentum"
    n: int = 1

    def to_dict(self) -> dict:
        return {"ma_window": self.ma_window, "transform": self.transform, "n": self.n}


@dataclass(frozen=True)
class ModelConfig:
    n_hidden: int = 8
    hidden_activation: str = "tanh"

    def to_dict(self) -> dict:
        return {"n_hidden": self.n_hidden, "hidden_activation": self.hidden_activation}


@dataclass(frozen=True)
class RunConfig:
    benchmark: str = "ma_momentum"
    lags: int = 13
    lag_range: tuple[int, ...] = tuple(range(1, 21))
    horizons: tuple[int, ...] = (1,)
    n_trials: int = 5
    seed: int = 1
    stability_threshold: float = 0.03
    futures_lags: int = 1
    input_series: str = "spot"
    target_series: str = "spot"
    jobs: int = 1

    def to_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "lags": self.lags,
            "lag_range": list(self.lag_range),
            "horizons": list(self.horizons),
            "n_trials": self.n_trials,
            "seed": self.seed,
            "stability_threshold": self.stability_threshold,
            "futures_lags": self.futures_lags,
            "input_series": self.input_series,
            "target_series": self.target_series,
            "jobs": self.jobs,
        }


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json")
    figures: bool = True

    def to_dict(self) -> dict:
        return {"dir": self.dir, "formats": list(self.formats), "figures": self.figures}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    data: DataConfig
    pipeline: PipelineConfig
    model: ModelConfig
    trainer: TrainOptions
    run: RunConfig
    output: OutputConfig

    def to_dict(self) -> dict:
        t = self.trainer
        return {
            "name": self.name,
            "data": self.data.to_dict(),
            "pipeline": self.pipeline.to_dict(),
            "model": self.model.to_dict(),
            "trainer": {
                "algorithm": t.algorithm,
                "max_iterations": t.max_iterations,
                "mu_init": t.mu_init,
                "mu_factor": t.mu_factor,
                "mu_max": t.mu_max,
                "grad_tol": t.grad_tol,
                "loss_tol": t.loss_tol,
                "gd_learning_rate": t.gd_learning_rate,
                "seed": t.seed,
            },
            "run": self.run.to_dict(),
            "output": self.output.to_dict(),
        }


def config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse_data(raw: dict) -> DataConfig:
    _take(raw, "data", ("source", "series", "train_fraction"))
    source = raw.get("source")
    _require(source in ("synthetic", "csv"), "data.source", f"must be synthetic or csv, got {source!r}")
    series_raw = raw.get("series")
    _require(isinstance(series_raw, dict) and series_raw, "data.series", "must be a non-empty mapping")
    series: dict = {}
    for sid, spec in series_raw.items():
        path = f"data.series.{sid}"
        _require(isinstance(spec, dict), path, "must be a mapping")
        spec = dict(spec)
        if source == "synthetic":
            kind = spec.pop("kind", None)
            _require(kind in SYNTHETIC_KINDS, f"{path}.kind", f"must be one of {SYNTHETIC_KINDS}")
            length = spec.pop("length", None)
            _require(isinstance(length, int) and length >= 2, f"{path}.length", "must be an int >= 2")
            seed = spec.pop("seed", None)
            _require(isinstance(seed, int), f"{path}.seed", "must be an int")
            series[sid] = SyntheticSeriesSpec(kind, length, seed, spec)
        else:
            _take(spec, path, ("path", "date_column", "price_column"))
            _require("path" in spec, path, "needs a path")
            series[sid] = CsvSeriesSpec(
                str(spec["path"]),
                str(spec.get("date_column", "Date")),
                str(spec.get("price_column", "Price")),
            )
    frac = raw.get("train_fraction", 0.9)
    _require(isinstance(frac, (int, float)) and 0 < frac < 1, "data.train_fraction", "must be in (0,1)")
    return DataConfig(source, series, float(frac))


def _parse_pipeline(raw: dict) -> PipelineConfig:
    _take(raw, "pipeline", ("ma_window", "transform", "n"))
    ma = raw.get("ma_window", 3)
    if ma in (None, 0):
        ma = None
    else:
        _require(isinstance(ma, int) and ma >= 1, "pipeline.ma_window", "must be a positive int or null")
    kind = raw.get("transform", "momentum")
    _require(kind in TRANSFORM_KINDS, "pipeline.transform", f"must be one of {TRANSFORM_KINDS}")
    n = raw.get("n", 1)
    _require(isinstance(n, int) and n >= 1, "pipeline.n", "must be a positive int")
    return PipelineConfig(ma, kind, n)


def _parse_model(raw: dict) -> ModelConfig:
    _take(raw, "model", ("n_hidden", "hidden_activation"))
    n_hidden = raw.get("n_hidden", 8)
    _require(isinstance(n_hidden, int) and n_hidden >= 1, "model.n_hidden", "must be a positive int")
    act = raw.get("hidden_activation", "tanh")
    _require(act in ("tanh", "logistic"), "model.hidden_activation", "must be tanh or logistic")
    return ModelConfig(n_hidden, act)


def _parse_trainer(raw: dict) -> TrainOptions:
    known = tuple(f.name for f in dc_fields(TrainOptions))
    _take(raw, "trainer", known)
    for key in ("max_iterations", "seed"):
        if key in raw:
            _require(isinstance(raw[key], int), f"trainer.{key}", "must be an int")
    for key in ("mu_init", "mu_factor", "mu_max", "grad_tol", "loss_tol", "gd_learning_rate"):
        if key in raw:
            # catches YAML 1.1 treating exponent forms like 1.0e10 as strings
            _require(isinstance(raw[key], (int, float)) and not isinstance(raw[key], bool),
                     f"trainer.{key}", f"must be a number, got {raw[key]!r}")
            raw[key] = float(raw[key])
    try:
        return TrainOptions(**raw)
    except Exception as e:
        raise ConfigError(f"trainer: {e}") from e


def _parse_run(raw: dict) -> RunConfig:
    known = tuple(f.name for f in dc_fields(RunConfig))
    _take(raw, "run", known)
    out = dict(raw)
    if "benchmark" in out:
        _require(out["benchmark"] in BENCHMARK_PIPELINES, "run.benchmark",
                 f"must be one of {BENCHMARK_PIPELINES}")
    for key in ("lags", "n_trials", "seed", "futures_lags", "jobs"):
        if key in out:
            _require(isinstance(out[key], int), f"run.{key}", "must be an int")
    if "lag_range" in out:
        lr = out["lag_range"]
        _require(isinstance(lr, (list, tuple)) and lr and all(isinstance(v, int) and v >= 1 for v in lr),
                 "run.lag_range", "must be a non-empty list of positive ints")
        out["lag_range"] = tuple(lr)
    if "horizons" in out:
        hz = out["horizons"]
        _require(isinstance(hz, (list, tuple)) and hz and all(isinstance(v, int) and v >= 1 for v in hz)
                 and list(hz) == sorted(set(hz)),
                 "run.horizons", "must be strictly increasing positive ints")
        out["horizons"] = tuple(hz)
    if "stability_threshold" in out:
        _require(isinstance(out["stability_threshold"], (int, float)) and out["stability_threshold"] >= 0,
                 "run.stability_threshold", "must be a non-negative number")
    return RunConfig(**out)


def _parse_output(raw: dict) -> OutputConfig:
    _take(raw, "output", ("dir", "formats", "figures"))
    formats = raw.get("formats", ["csv", "json"])
    _require(isinstance(formats, (list, tuple)) and formats
             and all(f in ("csv", "json") for f in formats),
             "output.formats", "must be a non-empty list drawn from csv, json")
    figures = raw.get("figures", True)
    _require(isinstance(figures, bool), "output.figures", "must be a boolean")
    return OutputConfig(str(raw.get("dir", "out")), tuple(formats), figures)


def config_from_dict(raw: dict) -> ExperimentConfig:
    _require(isinstance(raw, dict), "config", "top level must be a mapping")
    _take(raw, "config", ("name", "data", "pipeline", "model", "trainer", "run", "output"))
    _require("data" in raw, "config", "missing required section: data")
    sections = {
        "data": _parse_data(dict(raw["data"])),
        "pipeline": _parse_pipeline(dict(raw.get("pipeline") or {})),
        "model": _parse_model(dict(raw.get("model") or {})),
        "trainer": _parse_trainer(dict(raw.get("trainer") or {})),
        "run": _parse_run(dict(raw.get("run") or {})),
        "output": _parse_output(dict(raw.get("output") or {})),
    }
    name = str(raw.get("name", "experiment"))
    return ExperimentConfig(name, **sections)


def load_config(path: str | Path, overrides: list[str] | None = None) -> ExperimentConfig:
    """Read and validate a YAML or JSON config, then apply overrides."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"no such config file: {p}")
    text = p.read_text(encoding="utf-8")
    try:
        raw = json.loads(text) if p.suffix.lower() == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"{p}: cannot parse: {e}") from e
    if overrides:
        raw = apply_overrides(raw, overrides)
    return config_from_dict(raw)


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply key=value overrides with dotted-path addressing onto the raw
    mapping; values parse as YAML scalars (ints, floats, bools, lists)."""
    out = json.loads(json.dumps(raw))  # deep copy of plain data
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form dotted.path=value")
        dotted, _, value_text = item.partition("=")
        keys = [k for k in dotted.strip().split(".") if k]
        if not keys:
            raise ConfigError(f"override {item!r} has an empty path")
        try:
            value = yaml.safe_load(value_text)
        except yaml.YAMLError as e:
            raise ConfigError(f"override {item!r}: bad value: {e}") from e
        node = out
        for k in keys[:-1]:
            nxt = node.get(k)
            if nxt is None:
                nxt = {}
                node[k] = nxt
            if not isinstance(nxt, dict):
                raise ConfigError(f"override {item!r}: {k} is not a section")
            node = nxt
        node[keys[-1]] = value
    return out
