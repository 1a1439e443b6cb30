"""Command-line front end.

Verbs: ingest, sweep, benchmark, futures-solo, futures-add, multistep,
report, synth. Run verbs take --config plus optional --set overrides and
write reports, figures, and a run manifest under the output directory.

Exit codes: 0 success, 1 runtime/experiment failure, 2 usage or config
error. The default output directory comes from CRUDECAST_OUTPUT_DIR when
set.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, config_hash, load_config
from .errors import ConfigError, CrudecastError
from .experiments import (
    build_panel,
    emit_report,
    result_from_dict,
    run_benchmark,
    run_futures_augmented,
    run_futures_solo,
    run_lag_sweep,
    run_multistep,
    summary_lines,
)
from .network import network_to_json
from .series import export_panel_csv, gen_linked_set, load_csv_with_report, write_csv

logger = logging.getLogger(__name__)

VERBS = ("ingest", "sweep", "benchmark", "futures-solo", "futures-add", "multistep", "report", "synth")


@dataclass
class Command:
    verb: str
    config_path: str | None = None
    overrides: list[str] = field(default_factory=list)
    output_dir: str | None = None
    seed: int | None = None
    jobs: int | None = None
    figures: bool = True
    formats: list[str] = field(default_factory=lambda: ["csv", "json"])
    extra: dict = field(default_factory=dict)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crudecast",
        description="Crude-oil direction forecasting: benchmarks, futures augmentation, multi-step studies.",
    )
    parser.add_argument("--version", action="version", version=f"crudecast {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, needs_config=True):
        p.add_argument("--config", required=needs_config, help="experiment config file (YAML or JSON)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="PATH=VALUE", help="override a config value by dotted path")
        p.add_argument("--output-dir", default=None, help="output directory (default from config or env)")
        p.add_argument("--seed", type=int, default=None, help="override trainer.seed")
        p.add_argument("--jobs", type=int, default=None, help="max concurrent trials")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
        p.add_argument("--format", choices=("csv", "json", "both"), default=None,
                       help="report formats (default from config)")
        p.add_argument("-v", "--verbose", action="store_true")

    add_common(sub.add_parser("ingest", help="load, align, split, and export the configured series"))
    add_common(sub.add_parser("sweep", help="hit rate and RMSE across lag counts"))
    add_common(sub.add_parser("benchmark", help="train and persist the named benchmark pipeline"))

    p = sub.add_parser("futures-solo", help="lag sweep with one futures contract as input")
    add_common(p)
    p.add_argument("--contract", required=True, help="contract series id, e.g. fut1")

    p = sub.add_parser("futures-add", help="benchmark with futures contracts appended")
    add_common(p)
    p.add_argument("--contracts", required=True, help="comma-separated contract ids, e.g. fut1 or fut1,fut2")

    p = sub.add_parser("multistep", help="direct multi-step forecasts per horizon")
    add_common(p)
    p.add_argument("--horizons", default="1,2,3", help="comma-separated horizons (default 1,2,3)")
    p.add_argument("--futures", default=None, help="optionally add lags of this contract")

    p = sub.add_parser("report", help="re-render reports and figures from a stored result JSON")
    p.add_argument("--input", required=True, help="result JSON produced by a run verb")
    p.add_argument("--output-dir", default=None)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("synth", help="write hermetic synthetic spot + futures CSV fixtures")
    p.add_argument("--out", required=True, help="directory for the fixture CSVs")
    p.add_argument("--length", type=int, default=2705)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("-v", "--verbose", action="store_true")

    return parser


def parse_args(argv: list[str]) -> Command:
    ns = _build_parser().parse_args(argv)
    cmd = Command(verb=ns.verb)
    if ns.verb == "synth":
        cmd.extra = {"out": ns.out, "length": ns.length, "seed": ns.seed}
        return cmd
    if ns.verb == "report":
        cmd.extra = {"input": ns.input}
        cmd.output_dir = ns.output_dir
        cmd.figures = not ns.no_figures
        cmd.formats = ["csv", "json"] if ns.format == "both" else [ns.format]
        return cmd
    cmd.config_path = ns.config
    cmd.overrides = list(ns.overrides)
    cmd.output_dir = ns.output_dir
    cmd.seed = ns.seed
    cmd.jobs = ns.jobs
    cmd.figures = not ns.no_figures
    if ns.format is not None:
        cmd.formats = ["csv", "json"] if ns.format == "both" else [ns.format]
    else:
        cmd.formats = []
    if ns.verb == "futures-solo":
        cmd.extra = {"contract": ns.contract}
    elif ns.verb == "futures-add":
        cmd.extra = {"contracts": [c.strip() for c in ns.contracts.split(",") if c.strip()]}
    elif ns.verb == "multistep":
        horizons = tuple(int(h) for h in ns.horizons.split(",") if h.strip())
        cmd.extra = {"horizons": horizons, "futures": ns.futures}
    return cmd


def _resolved_config(cmd: Command) -> ExperimentConfig:
    overrides = list(cmd.overrides)
    if cmd.seed is not None:
        overrides.append(f"trainer.seed={cmd.seed}")
    if cmd.jobs is not None:
        overrides.append(f"run.jobs={cmd.jobs}")
    return load_config(cmd.config_path, overrides)


def _output_dir(cmd: Command, cfg: ExperimentConfig | None) -> Path:
    if cmd.output_dir:
        base = cmd.output_dir
    elif os.environ.get("CRUDECAST_OUTPUT_DIR"):
        base = os.environ["CRUDECAST_OUTPUT_DIR"]
    elif cfg is not None:
        base = cfg.output.dir
    else:
        base = "out"
    p = Path(base)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_manifest(out_dir: Path, verb: str, cfg: ExperimentConfig | None, seeds, outputs, started: float) -> None:
    doc = {
        "verb": verb,
        "config_hash": config_hash(cfg) if cfg is not None else None,
        "seeds": list(seeds),
        "package_version": __version__,
        "outputs": sorted(outputs),
        "timing": {"started_unix": started, "elapsed_seconds": time.time() - started},
    }
    (out_dir / "manifest.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_result(result, cfg: ExperimentConfig, cmd: Command, out_dir: Path) -> list[str]:
    from .plotting import save_figures

    formats = cmd.formats or list(cfg.output.formats)
    figures = cmd.figures and cfg.output.figures
    outputs: list[str] = []
    for fmt in formats:
        name = f"{result.name}.{fmt}"
        emit_report(result, fmt, out_dir / name)
        outputs.append(name)
    if getattr(result, "loss_curves", None):
        name = f"{result.name}_loss_curves.csv"
        with (out_dir / name).open("w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["trial", "iteration", "sse"])
            for i, curve in enumerate(result.loss_curves):
                for j, v in enumerate(curve):
                    w.writerow([i, j, repr(float(v))])
        outputs.append(name)
    if getattr(result, "best_network", None) is not None:
        name = f"{result.name}_network.json"
        (out_dir / name).write_text(network_to_json(result.best_network), encoding="utf-8")
        outputs.append(name)
    if figures:
        outputs.extend(save_figures(result, out_dir))
    return outputs


def _run_ingest(cfg: ExperimentConfig, out_dir: Path) -> list[str]:
    reports = {}
    if cfg.data.source == "csv":
        for sid, spec in cfg.data.series.items():
            _, rep = load_csv_with_report(spec.path, spec.date_column, spec.price_column, series_id=sid)
            reports[sid] = rep.to_dict()
    panel = build_panel(cfg)
    export_panel_csv(panel, out_dir / "panel.csv")
    doc = {
        "series": list(panel.series_ids),
        "rows": len(panel),
        "split_index": panel.split_index,
        "first_date": panel.dates[0].isoformat(),
        "last_date": panel.dates[-1].isoformat(),
        "load_reports": reports,
    }
    (out_dir / "ingest_report.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return ["panel.csv", "ingest_report.json"]


def _run_synth(cmd: Command) -> int:
    out_dir = Path(cmd.extra["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    series = gen_linked_set(cmd.extra["length"], cmd.extra["seed"])
    for s in series:
        write_csv(s, out_dir / f"{s.id}.csv")
    print(f"wrote {len(series)} series to {out_dir}: " + ", ".join(f"{s.id}.csv" for s in series))
    return 0


def _run_report(cmd: Command) -> int:
    from .plotting import save_figures

    src = Path(cmd.extra["input"])
    if not src.is_file():
        raise CrudecastError(f"no such result file: {src}")
    try:
        doc = json.loads(src.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CrudecastError(f"{src} is not a result JSON: {e}") from e
    result = result_from_dict(doc)
    out_dir = _output_dir(cmd, None) if cmd.output_dir else src.parent
    outputs = []
    for fmt in cmd.formats:
        name = f"{result.name}.{fmt}"
        emit_report(result, fmt, out_dir / name)
        outputs.append(name)
    if cmd.figures:
        outputs.extend(save_figures(result, out_dir))
    print(f"re-rendered {', '.join(sorted(outputs))} in {out_dir}")
    return 0


def dispatch(cmd: Command) -> int:
    """Run one parsed command; returns the process exit code."""
    started = time.time()
    if cmd.verb == "synth":
        return _run_synth(cmd)
    if cmd.verb == "report":
        return _run_report(cmd)

    cfg = _resolved_config(cmd)
    out_dir = _output_dir(cmd, cfg)

    if cmd.verb == "ingest":
        outputs = _run_ingest(cfg, out_dir)
        _write_manifest(out_dir, cmd.verb, cfg, [], outputs, started)
        print(f"ingested {cfg.name}: " + ", ".join(outputs))
        return 0

    if cmd.verb == "sweep":
        result = run_lag_sweep(cfg)
    elif cmd.verb == "benchmark":
        result = run_benchmark(cfg)
    elif cmd.verb == "futures-solo":
        result = run_futures_solo(cfg, cmd.extra["contract"])
    elif cmd.verb == "futures-add":
        result = run_futures_augmented(cfg, cmd.extra["contracts"])
    elif cmd.verb == "multistep":
        result = run_multistep(cfg, cmd.extra["horizons"], cmd.extra["futures"])
    else:  # pragma: no cover - argparse restricts the verb set
        raise ConfigError(f"unknown verb {cmd.verb!r}")

    outputs = _write_result(result, cfg, cmd, out_dir)
    seeds = list(getattr(result, "seeds", []))
    _write_manifest(out_dir, cmd.verb, cfg, seeds, outputs, started)
    for line in summary_lines(result):
        print(line)
    print(f"{cmd.verb} finished: " + ", ".join(sorted(outputs)) + f" in {out_dir}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        cmd = parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage; normalize --help to success
        return 0 if e.code in (0, None) else 2
    logging.basicConfig(
        level=logging.DEBUG if "-v" in argv or "--verbose" in argv else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return dispatch(cmd)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (CrudecastError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
