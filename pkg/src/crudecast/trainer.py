"""Network fitting: Levenberg-Marquardt (primary) and full-batch gradient
descent (baseline), plus multi-seed trial averaging.

LM iterates the damped normal equations (J^T J + mu I) delta = -J^T r.
A step is accepted only if it lowers the SSE; acceptance divides mu by
mu_factor, rejection multiplies it and retries with the same Jacobian.
Stopping: gradient norm below grad_tol, SSE at or below loss_tol (when
enabled), mu exceeding mu_max without an acceptable step, or the
iteration cap. The accepted-loss sequence is therefore strictly
decreasing, and training is fully determined by (layout, data, options,
seed).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError, TrainingError
from .metrics import METRIC_FIELDS, MetricBundle
from .network import Layout, Network, flatten, forward, gradient, init_network, jacobian, residuals, unflatten
from .supervised import SupervisedSet
from .transform import ScaleParams, minmax_invert

_MU_FLOOR = 1e-20


@dataclass(frozen=True)
class TrainOptions:
    algorithm: str = "lm"               # lm | gd
    max_iterations: int = 1000
    mu_init: float = 0.01
    mu_factor: float = 10.0
    mu_max: float = 1e10
    grad_tol: float = 1e-7
    loss_tol: float = 0.0               # 0 disables the loss criterion
    gd_learning_rate: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ("lm", "gd"):
            raise DataError(f"unknown training algorithm {self.algorithm!r}")
        if self.max_iterations < 1:
            raise DataError("max_iterations must be >= 1")
        if not self.mu_init > 0:
            raise DataError("mu_init must be > 0")
        if not self.mu_factor > 1:
            raise DataError("mu_factor must be > 1")


@dataclass(frozen=True)
class TrainReport:
    final_net: Network
    iterations_used: int
    loss_curve: np.ndarray              # SSE, index 0 = before training
    stop_reason: str                    # max_iter | grad_tol | mu_max | loss_tol | diverged

    def __post_init__(self):
        arr = np.asarray(self.loss_curve, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "loss_curve", arr)


def _sse(net: Network, X, y) -> float:
    r = residuals(net, X, y)
    return float(r @ r)


def _check_data(net: Network, X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if len(X) == 0:
        raise DataError("empty training data")
    if X.ndim != 2 or X.shape[1] != net.layout.n_inputs:
        raise DataError(f"X shape {X.shape} incompatible with {net.layout.n_inputs} inputs")
    if y.shape != (len(X), net.layout.n_outputs):
        raise DataError(f"y shape {y.shape} incompatible with X and {net.layout.n_outputs} outputs")
    return X, y


def fit_lm(net: Network, X, y, opts: TrainOptions) -> TrainReport:
    """Levenberg-Marquardt on 0.5 * SSE. Returns with SSE no higher than at
    the start; a singular damped system at mu_max stops cleanly."""
    X, y = _check_data(net, X, y)
    layout = net.layout
    theta = flatten(net)
    current = unflatten(layout, theta)
    sse = _sse(current, X, y)
    curve = [sse]
    mu = opts.mu_init
    eye = np.eye(layout.n_params)
    iterations = 0
    stop = "max_iter"

    while iterations < opts.max_iterations:
        J = jacobian(current, X)
        r = residuals(current, X, y)
        g = J.T @ r
        if float(np.linalg.norm(g)) < opts.grad_tol:
            stop = "grad_tol"
            break
        if opts.loss_tol > 0.0 and sse <= opts.loss_tol:
            stop = "loss_tol"
            break
        JtJ = J.T @ J

        accepted = False
        while mu <= opts.mu_max:
            try:
                # Cholesky doubles as the positive-definiteness check.
                L = np.linalg.cholesky(JtJ + mu * eye)
            except np.linalg.LinAlgError:
                mu = max(mu, _MU_FLOOR) * opts.mu_factor
                continue
            delta = _cho_solve(L, -g)
            candidate = unflatten(layout, theta + delta)
            sse_new = _sse(candidate, X, y)
            if np.isfinite(sse_new) and sse_new < sse:
                theta = theta + delta
                current = candidate
                sse = sse_new
                mu = max(mu / opts.mu_factor, _MU_FLOOR)
                accepted = True
                break
            mu = max(mu, _MU_FLOOR) * opts.mu_factor

        if not accepted:
            stop = "mu_max"
            break
        iterations += 1
        curve.append(sse)

    return TrainReport(current, iterations, np.array(curve), stop)


def _cho_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    z = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, z)


def fit_gd(net: Network, X, y, opts: TrainOptions) -> TrainReport:
    """Full-batch gradient descent baseline. Loss above 10x the starting
    value stops with reason 'diverged'; a non-finite loss is an error."""
    X, y = _check_data(net, X, y)
    layout = net.layout
    theta = flatten(net)
    current = unflatten(layout, theta)
    sse0 = _sse(current, X, y)
    curve = [sse0]
    iterations = 0
    stop = "max_iter"

    while iterations < opts.max_iterations:
        g = gradient(current, X, y)
        if float(np.linalg.norm(g)) < opts.grad_tol:
            stop = "grad_tol"
            break
        theta = theta - opts.gd_learning_rate * g
        current = unflatten(layout, theta)
        sse = _sse(current, X, y)
        if not np.isfinite(sse):
            raise TrainingError("gradient descent produced a non-finite loss")
        iterations += 1
        curve.append(sse)
        if sse > 10.0 * sse0:
            stop = "diverged"
            break
        if opts.loss_tol > 0.0 and sse <= opts.loss_tol:
            stop = "loss_tol"
            break

    return TrainReport(current, iterations, np.array(curve), stop)


def fit(net: Network, X, y, opts: TrainOptions) -> TrainReport:
    return fit_lm(net, X, y, opts) if opts.algorithm == "lm" else fit_gd(net, X, y, opts)


@dataclass(frozen=True)
class TrialResult:
    index: int
    seed: int
    report: TrainReport
    metrics_in: MetricBundle
    metrics_out: MetricBundle


@dataclass(frozen=True)
class MultiTrialResult:
    trials: tuple[TrialResult, ...]
    mean_in: dict
    std_in: dict
    mean_out: dict
    std_out: dict
    stable: bool
    best_index: int                     # highest out-of-sample hit rate

    @property
    def seeds(self) -> list[int]:
        return [t.seed for t in self.trials]

    @property
    def best(self) -> TrialResult:
        return self.trials[self.best_index]


def _aggregate(bundles: list[MetricBundle]) -> tuple[dict, dict]:
    mean: dict = {}
    std: dict = {}
    for name in METRIC_FIELDS:
        vals = [getattr(b, name) for b in bundles]
        if any(v is None for v in vals):
            mean[name] = None
            std[name] = None
        else:
            arr = np.array(vals, dtype=np.float64)
            mean[name] = float(arr.mean())
            std[name] = float(arr.std())
    return mean, std


def _evaluate(
    net: Network,
    ds: SupervisedSet,
    inverse_scale: ScaleParams | None,
    ic_prev: tuple[float | None, float | None],
) -> tuple[MetricBundle, MetricBundle]:
    def segment(X, y, prev):
        out = forward(net, X)[:, 0]
        t = y[:, 0]
        if inverse_scale is not None:
            out = minmax_invert(out, inverse_scale)
            t = minmax_invert(t, inverse_scale)
        return MetricBundle.compute(t, out, prev_target=prev)

    Xtr, ytr = ds.train_arrays()
    Xte, yte = ds.test_arrays()
    if len(Xtr) == 0 or len(Xte) == 0:
        raise DataError("train/test split leaves an empty segment")
    return segment(Xtr, ytr, ic_prev[0]), segment(Xte, yte, ic_prev[1])


def multi_trial(
    layout: Layout,
    ds: SupervisedSet,
    opts: TrainOptions,
    n_trials: int = 5,
    stability_threshold: float = 0.03,
    inverse_scale: ScaleParams | None = None,
    ic_prev: tuple[float | None, float | None] = (None, None),
    jobs: int = 1,
) -> MultiTrialResult:
    """Repeat training with seeds opts.seed, opts.seed+1, ... and average.

    The dataset must be single-horizon (one target column) with a split.
    Metrics are computed on the scale the targets had before minmax
    normalization when inverse_scale is given. The result is stable when
    the out-of-sample hit-rate standard deviation is at most
    stability_threshold.
    """
    if n_trials < 1:
        raise DataError("n_trials must be >= 1")
    if ds.y.shape[1] != 1:
        raise DataError("multi_trial expects a single-horizon dataset; use for_horizon()")
    if layout.n_inputs != ds.n_columns or layout.n_outputs != 1:
        raise DataError(
            f"layout ({layout.n_inputs} in / {layout.n_outputs} out) does not match "
            f"dataset with {ds.n_columns} columns"
        )
    Xtr, ytr = ds.train_arrays()

    def run_one(k: int) -> TrialResult:
        seed = opts.seed + k
        try:
            net = init_network(layout, seed)
            report = fit(net, Xtr, ytr, opts)
            m_in, m_out = _evaluate(report.final_net, ds, inverse_scale, ic_prev)
        except Exception as e:
            raise TrainingError(f"trial {k} (seed {seed}) failed: {e}") from e
        return TrialResult(k, seed, report, m_in, m_out)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, range(n_trials)))
    else:
        results = [run_one(k) for k in range(n_trials)]
    results.sort(key=lambda t: t.index)

    mean_in, std_in = _aggregate([t.metrics_in for t in results])
    mean_out, std_out = _aggregate([t.metrics_out for t in results])
    stable = std_out["hit_rate"] is not None and std_out["hit_rate"] <= stability_threshold
    best = max(results, key=lambda t: (t.metrics_out.hit_rate, -t.index))
    return MultiTrialResult(
        tuple(results), mean_in, std_in, mean_out, std_out, stable, best.index
    )
