import json
from pathlib import Path

import pytest
import yaml

from crudecast.config import apply_overrides, config_from_dict, config_hash, load_config
from crudecast.errors import ConfigError

BUNDLED = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = {
    "name": "t",
    "data": {
        "source": "synthetic",
        "series": {"spot": {"kind": "ar1", "length": 100, "seed": 1, "phi": 0.9}},
    },
}


def test_defaults():
    cfg = config_from_dict(MINIMAL)
    assert cfg.pipeline.ma_window == 3
    assert cfg.pipeline.transform == "momentum"
    assert cfg.model.n_hidden == 8
    assert cfg.trainer.algorithm == "lm"
    assert cfg.trainer.max_iterations == 1000
    assert cfg.trainer.mu_init == 0.01
    assert cfg.run.lags == 13
    assert cfg.run.n_trials == 5
    assert cfg.run.lag_range == tuple(range(1, 21))
    assert cfg.data.train_fraction == 0.9
    assert cfg.output.figures is True


def test_yaml_and_json_equivalent(tmp_path):
    ypath = tmp_path / "c.yaml"
    jpath = tmp_path / "c.json"
    ypath.write_text(yaml.safe_dump(MINIMAL))
    jpath.write_text(json.dumps(MINIMAL))
    a = load_config(ypath)
    b = load_config(jpath)
    assert a.to_dict() == b.to_dict()
    assert config_hash(a) == config_hash(b)


def test_unknown_keys_rejected():
    bad = {**MINIMAL, "pipeline": {"ma_window": 3, "typo_key": 1}}
    with pytest.raises(ConfigError, match="typo_key"):
        config_from_dict(bad)
    with pytest.raises(ConfigError, match="unknown key"):
        config_from_dict({**MINIMAL, "bogus_section": {}})


def test_missing_data_section():
    with pytest.raises(ConfigError, match="missing required section"):
        config_from_dict({"name": "x"})


def test_bad_values():
    with pytest.raises(ConfigError, match="data.source"):
        config_from_dict({**MINIMAL, "data": {"source": "sql", "series": {}}})
    with pytest.raises(ConfigError, match="benchmark"):
        config_from_dict({**MINIMAL, "run": {"benchmark": "other"}})
    with pytest.raises(ConfigError, match="horizons"):
        config_from_dict({**MINIMAL, "run": {"horizons": [2, 1]}})
    with pytest.raises(ConfigError, match="train_fraction"):
        config_from_dict({**MINIMAL, "data": {**MINIMAL["data"], "train_fraction": 1.5}})
    with pytest.raises(ConfigError, match="trainer"):
        config_from_dict({**MINIMAL, "trainer": {"mu_factor": 0.5}})


def test_csv_series_spec():
    raw = {
        "name": "c",
        "data": {"source": "csv", "series": {"spot": {"path": "spot.csv", "price_column": "Close"}}},
    }
    cfg = config_from_dict(raw)
    spec = cfg.data.series["spot"]
    assert spec.path == "spot.csv"
    assert spec.price_column == "Close"
    assert spec.date_column == "Date"


def test_overrides_typing():
    raw = apply_overrides(MINIMAL, [
        "trainer.max_iterations=200",
        "pipeline.ma_window=null",
        "run.horizons=[1,2]",
        "output.figures=false",
        "data.series.spot.phi=0.5",
    ])
    cfg = config_from_dict(raw)
    assert cfg.trainer.max_iterations == 200
    assert cfg.pipeline.ma_window is None
    assert cfg.run.horizons == (1, 2)
    assert cfg.output.figures is False
    assert cfg.data.series["spot"].params["phi"] == 0.5


def test_override_errors():
    with pytest.raises(ConfigError, match="dotted.path"):
        apply_overrides(MINIMAL, ["no-equals-sign"])
    with pytest.raises(ConfigError, match="not a section"):
        apply_overrides(MINIMAL, ["name.sub=1"])


def test_hash_stability_and_sensitivity():
    a = config_hash(config_from_dict(MINIMAL))
    b = config_hash(config_from_dict(json.loads(json.dumps(MINIMAL))))
    assert a == b
    changed = apply_overrides(MINIMAL, ["trainer.seed=99"])
    assert config_hash(config_from_dict(changed)) != a


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="no such config"):
        load_config(tmp_path / "absent.yaml")


def test_unparseable_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(p)


@pytest.mark.parametrize("name", ["synthetic_benchmark.yaml", "wti_template.yaml"])
def test_bundled_configs_validate(name):
    cfg = load_config(BUNDLED / name)
    assert cfg.run.benchmark == "ma_momentum"
    assert cfg.trainer.max_iterations == 1000
    assert cfg.run.lag_range == tuple(range(1, 21))
    assert isinstance(cfg.trainer.mu_max, float)  # YAML exponent forms parse as numbers


def test_string_trainer_number_rejected():
    with pytest.raises(ConfigError, match="mu_max.*number"):
        config_from_dict({**MINIMAL, "trainer": {"mu_max": "1.0e10"}})
