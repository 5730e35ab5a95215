from pathlib import Path

import pytest
from factories import SimConfigFactory

from pmms.core.config import (
    SimConfig,
    build_config,
    get_settings,
    load_config,
    load_yaml_config,
    parse_band,
    parse_override,
    parse_quantity,
)
from pmms.core.exceptions import ConfigurationException

SHIPPED_CONFIG = Path(__file__).resolve().parents[1] / "configs" / "simulation_configs.yaml"


@pytest.mark.parametrize(
    "kind, text, expected",
    [
        ("bytes", "100 MB", 100_000_000),
        ("bytes", "20 MB", 20_000_000),
        ("ms", "2 msec", 2.0),
        ("ms", "1 s", 1000.0),
        ("watts", "100 mW", 0.1),
        ("watts", "1.427e-08 W", 1.427e-8),
        ("hz", "914e+6 Hz", 914e6),
        ("hz", "2*1e6 Hz", 2e6),
        ("meters", "1.5 m", 1.5),
        ("count", "950000 packets/sec", 950_000),
        ("count", "≥ 10 nodes", 10),
    ],
)
def test_parse_quantity_reads_printed_units(kind, text, expected):
    assert parse_quantity(kind, text) == pytest.approx(expected, rel=1e-12)


def test_parse_quantity_passes_numbers_through():
    assert parse_quantity("ms", 4.5) == 4.5


def test_parse_quantity_rejects_unknown_unit():
    with pytest.raises(ValueError):
        parse_quantity("ms", "3 parsecs")


def test_parse_band_forms():
    assert parse_band("watts", "3 mW to 4 mW") == pytest.approx((3e-3, 4e-3))
    assert parse_band("watts", "1–2 mW") == pytest.approx((1e-3, 2e-3))
    assert parse_band("count", [1, 5]) == (1, 5)


def test_defaults_match_simulation_table():
    cfg = SimConfig()
    assert cfg.buffer_size == 100_000_000
    assert cfg.audio_file_size == 20_000_000
    assert cfg.text_file_size == 5_000_000
    assert (cfg.min_channel_time, cfg.max_channel_time) == (2.0, 6.0)
    assert (cfg.ping_time, cfg.oneway_time) == (3.0, 2.0)
    assert cfg.rssi_threshold == pytest.approx((3e-3, 4e-3))
    assert cfg.rssi_handoff == pytest.approx((1e-3, 2e-3))
    assert cfg.proc_cap == 1_000_000
    assert (cfg.arrivalrate_min, cfg.arrivalrate_avg, cfg.arrivalrate_max) == (150_000, 650_000, 950_000)


def test_shipped_config_loads_to_the_defaults():
    cfg = load_config(str(SHIPPED_CONFIG))
    defaults = SimConfig()
    for name in (
        "buffer_size",
        "audio_file_size",
        "min_channel_time",
        "ping_time",
        "rssi_max",
        "rssi_threshold",
        "rssi_handoff",
        "wireless_frequency",
        "bandwidth",
        "receivepower_threshold",
        "trans_power",
        "proc_cap",
        "arrivalrate_max",
        "load_max",
        "load_avg",
        "load_min",
    ):
        assert getattr(cfg, name) == pytest.approx(getattr(defaults, name), rel=1e-12), name

    delays = cfg.delay_config()
    assert (delays.load_low_max, delays.load_high_min) == (5, 10)


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigurationException):
        build_config({"bogus_knob": 1})


def test_field_names_and_printed_names_both_accepted():
    assert build_config({"min_channel_time": 3}).min_channel_time == 3.0
    assert build_config({"minChannelTime": "4 msec"}).min_channel_time == 4.0


@pytest.mark.parametrize(
    "values",
    [
        {"arrivalrate_max": 1_000_000},
        {"minChannelTime": 7},
        {"center_bias": 0.7, "heading_persistence": 0.5},
        {"drift_weight": 0.7},
        {"n_test": 0},
    ],
)
def test_inconsistent_values_are_configuration_errors(values):
    with pytest.raises(ConfigurationException):
        build_config(values)


def test_with_overrides_keeps_other_values():
    cfg = SimConfigFactory(n_test=30)
    changed = cfg.with_overrides(seed=99, pingTime="5 msec")
    assert changed.seed == 99
    assert changed.ping_time == 5.0
    assert changed.n_test == 30


def test_resolution_order_file_then_overrides(tmp_path):
    path = tmp_path / "sim.yaml"
    path.write_text("pingTime: 4 msec\nseed: 3\nn_test: 12\n", encoding="utf-8")

    from_file = load_config(str(path))
    assert (from_file.ping_time, from_file.seed, from_file.n_test) == (4.0, 3, 12)

    overridden = load_config(str(path), {"ping_time": 6, "seed": 8})
    assert (overridden.ping_time, overridden.seed, overridden.n_test) == (6.0, 8, 12)


def test_environment_variable_points_at_config(tmp_path, monkeypatch):
    path = tmp_path / "env.yaml"
    path.write_text("seed: 1234\n", encoding="utf-8")
    monkeypatch.setenv("PMMS_CONFIG", str(path))
    assert load_config().seed == 1234


def test_get_settings_is_cached(monkeypatch):
    monkeypatch.delenv("PMMS_CONFIG", raising=False)
    get_settings.cache_clear()
    try:
        assert get_settings() is get_settings()
    finally:
        get_settings.cache_clear()


def test_load_yaml_config_errors(tmp_path):
    with pytest.raises(ConfigurationException):
        load_yaml_config(str(tmp_path / "missing.yaml"))

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationException):
        load_yaml_config(str(listing))

    broken = tmp_path / "broken.yaml"
    broken.write_text("seed: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationException):
        load_yaml_config(str(broken))

    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_yaml_config(str(empty)) == {}


def test_parse_override():
    assert parse_override("n_test=50") == ("n_test", 50)
    assert parse_override("pingTime=3 msec") == ("pingTime", "3 msec")
    assert parse_override("iapp_enabled=false") == ("iapp_enabled", False)
    with pytest.raises(ConfigurationException):
        parse_override("novalue")


def test_module_configs_follow_sim_config():
    cfg = SimConfig(iapp_enabled=False, tm_top_x=2, history_min_aps=2, test_min_aps=4)
    assert cfg.delay_config().iapp_enabled is False
    assert cfg.prediction_config().tm_top_x == 2
    assert cfg.prediction_config().lt_floor == cfg.receivepower_threshold
    assert cfg.mobility_config(history=True).min_aps == 2
    assert cfg.mobility_config().min_aps == 4
    assert cfg.reservation_config().buffer_size == cfg.buffer_size
    assert cfg.radio_config().rssi_warning_band == cfg.rssi_threshold
