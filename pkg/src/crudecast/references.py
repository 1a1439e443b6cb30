"""Reference values from the original 1996-2007 WTI runs.

These are shown beside fresh results in reports so users can compare
against the previously reported numbers. They are not test targets: the
original data vintage is not redistributable and training is stochastic,
so nothing here is asserted anywhere.

Hit rates are percentages; errors are on the relative-change scale.
"""

REFERENCE_NOTE = (
    "Previously reported values for the 1996-2007 WTI vintage; "
    "shown for comparison only, not reproduced exactly by fresh runs."
)

# Candidate benchmark: momentum + force inputs (7 lags each), force target.
CANDIDATE_BENCHMARK = {
    "in": {"hit_rate_pct": 74.93, "rmse": 0.02312, "mse": 0.00052, "mae": 0.01724},
    "out": {"hit_rate_pct": 76.0, "rmse": 0.01922, "mse": 0.00038, "mae": 0.01502},
}

# Adopted benchmark: 3-day moving average + relative change, 13 lags.
MA_BENCHMARK_LAG13 = {
    "in": {"hit_rate_pct": 79.45, "rmse": 0.0083},
    "out": {"hit_rate_pct": 79.79, "rmse": 0.0068},
}

# One-month futures contract alone as input, 7 lags.
FUTURES1_SOLO_LAG7 = {
    "in": {"hit_rate_pct": 75.23, "rmse": 0.0099},
    "out": {"hit_rate_pct": 77.61, "rmse": 0.0073},
}

# One-month futures contract added on top of the benchmark.
FUTURES1_AUGMENTED = {
    "in": {"hit_rate_pct": 79.18, "rmse": 0.0084, "mse": 0.0001, "mae": 0.0063},
    "out": {"hit_rate_pct": 80.44, "rmse": 0.0059, "mse": 0.0, "mae": 0.0046},
}

# Spot-only multi-step hit rates (percent) for horizons t+1, t+2, t+3.
MULTISTEP_SPOT = {
    "in": {1: 78.60, 2: 67.45, 3: 54.0},
    "out": {1: 78.72, 2: 66.66, 3: 50.0},
}

# Multi-step hit rates with one futures lag added, per contract.
MULTISTEP_FUTURES_ADDED = {
    "fut1": {"in": {1: 78.35, 2: 68.31, 3: 56.0}, "out": {1: 77.50, 2: 66.0, 3: 53.0}},
    "fut2": {"in": {1: 78.81, 2: 67.96, 3: 56.67}, "out": {1: 78.69, 2: 66.78, 3: 52.95}},
    "fut3": {"in": {1: 78.73, 2: 67.72, 3: 55.45}, "out": {1: 78.97, 2: 66.30, 3: 48.59}},
    "fut4": {"in": {1: 78.94, 2: 68.28, 3: 55.35}, "out": {1: 78.84, 2: 67.28, 3: 49.82}},
}


def reference_for(kind: str, detail: str | None = None) -> dict | None:
    """Reference block for a report, or None when there is no match."""
    if kind == "benchmark":
        table = CANDIDATE_BENCHMARK if detail == "momentum_force" else MA_BENCHMARK_LAG13
        return {"note": REFERENCE_NOTE, "values": table}
    if kind == "sweep" and detail == "ma_momentum":
        return {"note": REFERENCE_NOTE, "values": {"lag13": MA_BENCHMARK_LAG13}}
    if kind == "futures_solo" and detail == "fut1":
        return {"note": REFERENCE_NOTE, "values": {"lag7": FUTURES1_SOLO_LAG7}}
    if kind == "futures_augmented" and detail == "fut1":
        return {"note": REFERENCE_NOTE, "values": FUTURES1_AUGMENTED}
    if kind == "multistep":
        if detail in MULTISTEP_FUTURES_ADDED:
            vals = MULTISTEP_FUTURES_ADDED[detail]
        elif detail is None:
            vals = MULTISTEP_SPOT
        else:
            return None
        return {
            "note": REFERENCE_NOTE,
            "values": {seg: {f"t+{h}": v for h, v in d.items()} for seg, d in vals.items()},
        }
    return None
