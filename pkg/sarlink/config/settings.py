"""Application settings and configuration."""

import os
from dataclasses import dataclass
from typing import Dict, Any, Optional

from ..radio.modem import ModemConfig
from ..monitor.monitor import MonitorThresholds


def _env_bool(name: str, default: bool) -> bool:
    return os.getenv(name, 'true' if default else 'false').strip().lower() == 'true'


@dataclass
class SarlinkSettings:
    """Central configuration for the SARLINK beacon toolkit."""

    # Seeded generation (fuzz corpora, channel noise, replay jitter)
    default_seed: int = 406

    # Modem settings
    sample_rate: int = 48000
    bit_rate: int = 400
    preamble_s: float = 0.160
    phase_dev: float = 1.1
    detect_threshold_db: float = 10.0
    hangover_s: float = 0.020
    max_sync_mismatches: int = 0

    # Monitor settings
    position_jump_km: float = 50.0
    interval_nominal_s: float = 52.0
    interval_tolerance: float = 0.20
    history_size: int = 64
    unknown_flood_count: int = 5
    unknown_flood_window_s: float = 60.0
    idle_expiry_intervals: float = 10.0
    max_tracked_beacons: int = 10_000

    # Waterfall image settings
    waterfall_width: int = 1024
    waterfall_height: int = 512
    waterfall_fft_size: int = 256
    annotation_text_color: str = "yellow"

    # Logging settings
    enable_debug_logging: bool = False
    log_file: Optional[str] = None

    @classmethod
    def load_from_env(cls) -> 'SarlinkSettings':
        """Load settings from environment variables."""
        settings = cls()

        # Override with environment variables if present
        settings.default_seed = int(os.getenv('SARLINK_SEED', str(settings.default_seed)))
        settings.sample_rate = int(os.getenv('SARLINK_SAMPLE_RATE', str(settings.sample_rate)))
        settings.max_sync_mismatches = int(os.getenv('SARLINK_SYNC_MISMATCHES', str(settings.max_sync_mismatches)))
        settings.enable_debug_logging = _env_bool('SARLINK_DEBUG', settings.enable_debug_logging)
        settings.log_file = os.getenv('SARLINK_LOG_FILE') or settings.log_file

        return settings

    def modem_config(self, sample_rate: Optional[int] = None) -> ModemConfig:
        """Build the modem configuration, optionally at another sample rate."""
        return ModemConfig(
            sample_rate=sample_rate or self.sample_rate,
            bit_rate=self.bit_rate,
            preamble_s=self.preamble_s,
            phase_dev=self.phase_dev,
            detect_threshold_db=self.detect_threshold_db,
            hangover_s=self.hangover_s,
            max_sync_mismatches=self.max_sync_mismatches,
        )

    def monitor_thresholds(self) -> MonitorThresholds:
        """Build the spoof-monitor thresholds."""
        return MonitorThresholds(
            position_jump_km=self.position_jump_km,
            interval_nominal_s=self.interval_nominal_s,
            interval_tolerance=self.interval_tolerance,
            history_size=self.history_size,
            unknown_flood_count=self.unknown_flood_count,
            unknown_flood_window_s=self.unknown_flood_window_s,
            idle_expiry_intervals=self.idle_expiry_intervals,
            max_tracked_beacons=self.max_tracked_beacons,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary."""
        return {
            'default_seed': self.default_seed,
            'sample_rate': self.sample_rate,
            'bit_rate': self.bit_rate,
            'preamble_s': self.preamble_s,
            'phase_dev': self.phase_dev,
            'detect_threshold_db': self.detect_threshold_db,
            'hangover_s': self.hangover_s,
            'max_sync_mismatches': self.max_sync_mismatches,
            'position_jump_km': self.position_jump_km,
            'interval_nominal_s': self.interval_nominal_s,
            'interval_tolerance': self.interval_tolerance,
            'history_size': self.history_size,
            'unknown_flood_count': self.unknown_flood_count,
            'unknown_flood_window_s': self.unknown_flood_window_s,
            'idle_expiry_intervals': self.idle_expiry_intervals,
            'max_tracked_beacons': self.max_tracked_beacons,
            'enable_debug_logging': self.enable_debug_logging,
            'log_file': self.log_file,
        }
