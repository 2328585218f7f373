"""Spoof-pattern monitor for decoded report streams."""

from .monitor import (
    Alert, AlertKind, Severity, MonitorThresholds, MonitorState, Observation,
    BeaconMonitor, MonitorError, TimeRegression, beacon_key, great_circle_km,
)

__all__ = [
    'Alert', 'AlertKind', 'Severity', 'MonitorThresholds', 'MonitorState', 'Observation',
    'BeaconMonitor', 'MonitorError', 'TimeRegression', 'beacon_key', 'great_circle_km',
]
