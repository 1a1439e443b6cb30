"""Figure rendering for the report path.

Each run writes PNG figures next to its CSV/JSON reports: hit-rate and
RMSE curves for lag sweeps, loss curves for benchmark trials, and grouped
bars for multi-step results. Rendering is headless (Agg).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import AugmentResult, BenchmarkResult, MultistepResult, SweepResult

_PNG_KW = {"dpi": 120, "bbox_inches": "tight"}


def save_sweep_figure(result: SweepResult, path: str | Path) -> None:
    rows = [r for r in result.rows if r.error is None and r.hit_out is not None]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    if rows:
        lags = [r.lag for r in rows]
        ax1.plot(lags, [100 * r.hit_in for r in rows], "o-", label="in-sample")
        ax1.plot(lags, [100 * r.hit_out for r in rows], "s-", label="out-of-sample")
        unstable = [r.lag for r in rows if r.stable is False]
        for x in unstable:
            ax1.axvline(x, color="0.85", zorder=0)
        ax2.plot(lags, [r.rmse_in for r in rows], "o-", label="in-sample")
        ax2.plot(lags, [r.rmse_out for r in rows], "s-", label="out-of-sample")
    best = result.best_stable_lag
    if best is not None:
        ax1.axvline(best, color="tab:green", linestyle="--", label=f"best stable lag = {best}")
    ax1.set_ylabel("hit rate (%)")
    ax1.legend(loc="best", fontsize=8)
    ax1.set_title(f"{result.name}: input {result.input_series} -> target {result.target_series}")
    ax2.set_xlabel("lags")
    ax2.set_ylabel("RMSE")
    ax2.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_loss_curves_figure(curves, path: str | Path, title: str = "training loss") -> None:
    """curves: iterable of (label, 1-D array of SSE per iteration)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, curve in curves:
        ax.semilogy(np.arange(len(curve)), curve, label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("SSE")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_multistep_figure(result: MultistepResult, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    horizons = [r.horizon for r in result.rows]
    x = np.arange(len(horizons))
    width = 0.38
    ax.bar(x - width / 2, [100 * (r.hit_in or 0) for r in result.rows], width, label="in-sample")
    ax.bar(x + width / 2, [100 * (r.hit_out or 0) for r in result.rows], width, label="out-of-sample")
    ax.axhline(50.0, color="0.6", linestyle=":", linewidth=1)
    ax.set_xticks(x, [f"t+{h}" for h in horizons])
    ax.set_ylabel("hit rate (%)")
    title = result.name if not result.futures_contract else f"{result.name} (+{result.futures_contract})"
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_benchmark_figure(result: BenchmarkResult, path: str | Path) -> None:
    labels = ["hit_rate", "rmse", "mae"]
    fig, axes = plt.subplots(1, len(labels), figsize=(9, 3.2))
    for ax, name in zip(axes, labels):
        vals_in = [t["in"][name] for t in result.per_trial]
        vals_out = [t["out"][name] for t in result.per_trial]
        trials = np.arange(len(result.per_trial))
        scale = 100.0 if name == "hit_rate" else 1.0
        ax.plot(trials, [scale * v for v in vals_in], "o-", label="in")
        ax.plot(trials, [scale * v for v in vals_out], "s-", label="out")
        ax.set_title(name + (" (%)" if name == "hit_rate" else ""))
        ax.set_xlabel("trial")
        ax.legend(fontsize=7)
    fig.suptitle(f"{result.name}: {result.pipeline_name}, {result.lags} lags")
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_augment_figure(result: AugmentResult, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = ["in-sample", "out-of-sample"]
    bench = [100 * result.benchmark_in["hit_rate"], 100 * result.benchmark_out["hit_rate"]]
    aug = [100 * result.augmented_in["hit_rate"], 100 * result.augmented_out["hit_rate"]]
    x = np.arange(len(groups))
    width = 0.38
    ax.bar(x - width / 2, bench, width, label="benchmark")
    label = "+" + ",".join(result.contracts) if result.contracts else "benchmark (no contracts)"
    ax.bar(x + width / 2, aug, width, label=label)
    ax.set_xticks(x, groups)
    ax.set_ylabel("hit rate (%)")
    ax.set_title(result.name)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_figures(result, out_dir: str | Path) -> list[str]:
    """Render every figure that applies to this result; returns filenames."""
    out_dir = Path(out_dir)
    written: list[str] = []

    def emit(fn, obj, name):
        fn(obj, out_dir / name)
        written.append(name)

    if isinstance(result, SweepResult):
        emit(save_sweep_figure, result, f"{result.name}.png")
    elif isinstance(result, MultistepResult):
        emit(save_multistep_figure, result, f"{result.name}.png")
    elif isinstance(result, AugmentResult):
        emit(save_augment_figure, result, f"{result.name}.png")
    elif isinstance(result, BenchmarkResult):
        emit(save_benchmark_figure, result, f"{result.name}.png")
        if result.loss_curves:
            curves = [(f"trial {i}", c) for i, c in enumerate(result.loss_curves)]
            save_loss_curves_figure(curves, out_dir / f"{result.name}_loss.png", title=f"{result.name} loss curves")
            written.append(f"{result.name}_loss.png")
    return written
