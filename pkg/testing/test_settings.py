"""Tests for settings loading and derived configurations."""

from sarlink.config.settings import SarlinkSettings
from sarlink.main import EXIT_USAGE, main
from sarlink.monitor import MonitorThresholds
from sarlink.radio.modem import ModemConfig


def test_defaults(settings):
    assert settings.default_seed == 406
    assert settings.sample_rate == 48000
    assert settings.modem_config() == ModemConfig()
    assert settings.monitor_thresholds() == MonitorThresholds()


def test_environment_overrides(settings, monkeypatch):
    monkeypatch.setenv("SARLINK_SEED", "7")
    monkeypatch.setenv("SARLINK_SAMPLE_RATE", "8000")
    monkeypatch.setenv("SARLINK_SYNC_MISMATCHES", "2")
    monkeypatch.setenv("SARLINK_DEBUG", "TRUE")
    monkeypatch.setenv("SARLINK_LOG_FILE", "/tmp/sarlink.log")
    loaded = SarlinkSettings.load_from_env()
    assert loaded.default_seed == 7
    assert loaded.sample_rate == 8000
    assert loaded.max_sync_mismatches == 2
    assert loaded.enable_debug_logging is True
    assert loaded.log_file == "/tmp/sarlink.log"
    assert loaded.modem_config().max_sync_mismatches == 2


def test_unset_environment_keeps_defaults(settings):
    assert SarlinkSettings.load_from_env().to_dict() == settings.to_dict()


def test_modem_config_at_another_rate(settings):
    cfg = settings.modem_config(8000)
    assert cfg.sample_rate == 8000
    assert cfg.samples_per_bit == 20
    assert cfg.preamble_samples == 1280


def test_to_dict_covers_monitor_thresholds(settings):
    settings.position_jump_km = 25.0
    data = settings.to_dict()
    assert data["position_jump_km"] == 25.0
    assert settings.monitor_thresholds().position_jump_km == 25.0
    for key in ("history_size", "unknown_flood_count", "unknown_flood_window_s", "max_tracked_beacons"):
        assert key in data


def test_bad_environment_value_is_a_usage_error(settings, monkeypatch):
    monkeypatch.setenv("SARLINK_SEED", "many")
    assert main(["status"]) == EXIT_USAGE
