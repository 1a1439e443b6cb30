"""crudecast: direction-of-change forecasting for crude oil spot prices.

Pipeline pieces: dated price series and panels (series), preprocessing
transforms with exact inverse bookkeeping (transform), lagged supervised
sets (supervised), a three-layer feedforward network (network),
Levenberg-Marquardt training with trial averaging (trainer), the metric
suite (metrics), and a config-driven experiment harness (experiments, cli).
"""

__version__ = "0.1.0"

from .errors import ConfigError, CrudecastError, DataError, TrainingError
from .metrics import MetricBundle, error_stats, hit_rate, info_coefficient
from .network import Layout, Network, forward, gradient, init_network, jacobian
from .series import AlignedPanel, PriceSeries, align, gen_synthetic, load_csv, split_chrono
from .supervised import FeatureSpec, SupervisedSet, append_features, build_design
from .trainer import TrainOptions, TrainReport, fit_gd, fit_lm, multi_trial
from .transform import (
    ScaleParams,
    TransformedSeries,
    force,
    minmax_apply,
    minmax_fit,
    minmax_invert,
    momentum,
    moving_average,
)

__all__ = [
    "__version__",
    "AlignedPanel", "ConfigError", "CrudecastError", "DataError", "FeatureSpec",
    "Layout", "MetricBundle", "Network", "PriceSeries", "ScaleParams",
    "SupervisedSet", "TrainOptions", "TrainReport", "TrainingError",
    "TransformedSeries", "align", "append_features", "build_design",
    "error_stats", "fit_gd", "fit_lm", "force", "forward", "gen_synthetic",
    "gradient", "hit_rate", "info_coefficient", "init_network", "jacobian",
    "load_csv", "minmax_apply", "minmax_fit", "minmax_invert", "momentum",
    "moving_average", "multi_trial", "split_chrono",
]
