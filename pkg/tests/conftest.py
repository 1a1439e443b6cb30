"""Shared fixtures: tiny deterministic series and config factories."""

from datetime import date, timedelta

import numpy as np
import pytest

from crudecast.series import PriceSeries, write_csv

EPOCH = date(2000, 1, 3)


def make_series(values, sid="spot", start=EPOCH) -> PriceSeries:
    values = np.asarray(values, dtype=np.float64)
    dates = tuple(start + timedelta(days=i) for i in range(len(values)))
    return PriceSeries(sid, dates, values)


def alternating_series(n=400, sid="spot") -> PriceSeries:
    """Noiseless sign-alternating prices: direction is exactly predictable
    from one momentum lag."""
    return make_series(100.0 + 5.0 * ((-1.0) ** np.arange(n)), sid=sid)


def monotone_series(n=400, sid="spot") -> PriceSeries:
    return make_series(100.0 + np.arange(n, dtype=float), sid=sid)


def ar1_series(n, seed, phi=0.95, sigma=1.0, base=100.0, sid="spot") -> PriceSeries:
    rng = np.random.default_rng(seed)
    x = np.empty(n)
    x[0] = sigma / np.sqrt(1.0 - phi * phi) * rng.standard_normal()
    for i in range(1, n):
        x[i] = phi * x[i - 1] + sigma * rng.standard_normal()
    return make_series(x + base, sid=sid)


@pytest.fixture
def csv_config_factory(tmp_path):
    """Write PriceSeries to CSVs and return a raw config dict around them."""

    def build(series_list, **kw):
        files = {}
        for s in series_list:
            path = tmp_path / f"{s.id}.csv"
            write_csv(s, path)
            files[s.id] = {"path": str(path)}
        raw = {
            "name": kw.pop("name", "test"),
            "data": {
                "source": "csv",
                "series": files,
                "train_fraction": kw.pop("train_fraction", 0.9),
            },
            "pipeline": kw.pop("pipeline", {"ma_window": None, "transform": "momentum", "n": 1}),
            "model": kw.pop("model", {"n_hidden": 4}),
            "trainer": {"algorithm": "lm", "max_iterations": 50, "seed": 2, **kw.pop("trainer", {})},
            "run": {"benchmark": "ma_momentum", "lags": 1, "n_trials": 3, **kw.pop("run", {})},
            "output": kw.pop("output", {"dir": str(tmp_path / "out")}),
        }
        assert not kw, f"unused config keys: {kw}"
        return raw

    return build
