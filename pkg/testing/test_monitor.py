"""Tests for the spoof-pattern stream monitor."""

import dataclasses

import pytest

from sarlink.codec.beacon import Position
from sarlink.codec.protocols import decode_frame, encode_beacon
from sarlink.monitor import (
    AlertKind, BeaconMonitor, MonitorError, MonitorThresholds, Observation, Severity,
    TimeRegression, beacon_key, great_circle_km,
)


def _report(spec, latitude=None, longitude=None):
    if latitude is not None:
        spec = dataclasses.replace(spec, position=Position(latitude, longitude))
    return decode_frame(encode_beacon(spec))


def _obs(time_s, hex_id="ABCDEF012345678", protocol="std_loc_epirb_mmsi", **kwargs):
    return Observation(time_s=time_s, hex_id=hex_id, protocol=protocol, **kwargs)


def test_spoofed_position_jump_is_critical(mmsi_spec):
    monitor = BeaconMonitor()
    first = _report(mmsi_spec, 60.1699, 24.9384)
    second = _report(mmsi_spec, 61.0699, 24.9384)
    assert great_circle_km((60.1699, 24.9384), (61.0699, 24.9384)) == pytest.approx(100.0, abs=1.0)

    assert monitor.ingest(first, 0.0) == []
    alerts = monitor.ingest(second, 52.0)
    assert len(alerts) == 1
    alert = alerts[0]
    assert alert.kind is AlertKind.DUPLICATE_ID_POSITION_JUMP
    assert alert.severity is Severity.CRITICAL
    assert alert.hex_id == second.hex_id
    assert alert.evidence['times'] == [0.0, 52.0]
    assert alert.evidence['distance_km'] > 50.0
    assert alert.evidence['signal_strength_check'] == 'not_performed'


def test_single_report_raises_nothing(mmsi_spec):
    assert BeaconMonitor().ingest(_report(mmsi_spec), 0.0) == []


def test_nominal_stream_raises_nothing(mmsi_spec, national_plb_spec):
    monitor = BeaconMonitor()
    drifting = [_report(mmsi_spec, 60.1699 + 0.01 * i, 24.9384) for i in range(10)]
    steady = _report(national_plb_spec)
    alerts = []
    for index, report in enumerate(drifting):
        alerts += monitor.ingest(report, 52.0 * index + (0.5 if index % 2 else -0.5) * (index > 0))
        alerts += monitor.ingest(steady, 52.0 * index + 1.0)
    assert alerts == []


def test_slow_moves_are_not_jumps(mmsi_spec):
    monitor = BeaconMonitor()
    monitor.ingest(_report(mmsi_spec, 60.0, 24.0), 0.0)
    assert monitor.ingest(_report(mmsi_spec, 61.0, 24.0), 104.0) == []


def test_time_regression():
    monitor = BeaconMonitor()
    monitor.ingest_observation(_obs(10.0))
    with pytest.raises(TimeRegression):
        monitor.ingest_observation(_obs(5.0, hex_id="000000000000000"))


def test_interval_anomaly():
    monitor = BeaconMonitor()
    monitor.ingest_observation(_obs(0.0))
    assert monitor.ingest_observation(_obs(52.0)) == []
    alerts = monitor.ingest_observation(_obs(80.0))
    assert [alert.kind for alert in alerts] == [AlertKind.INTERVAL_ANOMALY]
    assert alerts[0].severity is Severity.WARN
    assert alerts[0].evidence['spacing_s'] == pytest.approx(28.0)
    assert alerts[0].evidence['expected_s'] == pytest.approx(52.0)


def test_missed_bursts_are_tolerated():
    monitor = BeaconMonitor()
    monitor.ingest_observation(_obs(0.0))
    assert monitor.ingest_observation(_obs(104.5)) == []
    assert monitor.ingest_observation(_obs(260.0)) == []


def test_bch_degraded_severity():
    monitor = BeaconMonitor()
    corrected = monitor.ingest_observation(_obs(0.0, bch1_status="corrected", bch2_status="clean"))
    assert [(a.kind, a.severity) for a in corrected] == [(AlertKind.BCH_DEGRADED, Severity.INFO)]
    damaged = monitor.ingest_observation(_obs(52.0, bch1_status="clean", bch2_status="uncorrectable"))
    assert [(a.kind, a.severity) for a in damaged] == [(AlertKind.BCH_DEGRADED, Severity.WARN)]


def test_unknown_protocol_flood_latches():
    monitor = BeaconMonitor(MonitorThresholds(unknown_flood_count=5, unknown_flood_window_s=60.0))
    alerts = []
    for index in range(8):
        alerts += monitor.ingest_observation(_obs(float(index), protocol="unknown"))
    assert [alert.kind for alert in alerts] == [AlertKind.UNKNOWN_PROTOCOL_FLOOD]
    assert alerts[0].evidence['count'] == 6

    # the window drains, then a second flood alerts again
    assert monitor.ingest_observation(_obs(100.0, protocol="unknown")) == []
    again = []
    for index in range(6):
        again += monitor.ingest_observation(_obs(101.0 + index, protocol="unknown"))
    assert len(again) == 1


def test_beacon_key_ignores_coarse_position(mmsi_spec, national_plb_spec):
    a = _report(mmsi_spec, 10.0, 10.0).hex_id
    b = _report(mmsi_spec, -40.0, 100.0).hex_id
    assert a != b
    assert beacon_key(a) == beacon_key(b)
    assert beacon_key(a) == beacon_key(_report(dataclasses.replace(mmsi_spec, position=None)).hex_id)
    assert beacon_key(a) != beacon_key(_report(national_plb_spec).hex_id)
    assert beacon_key("not hex at all") == "not hex at all"


def test_tracked_beacons_are_capped():
    monitor = BeaconMonitor(MonitorThresholds(max_tracked_beacons=100))
    for index in range(1000):
        monitor.ingest_observation(_obs(index * 0.01, hex_id=f"{index:015X}"))
    assert len(monitor.state.histories) == 100
    assert list(monitor.state.histories)[0] == f"{900:015X}"


def test_idle_beacons_expire(mmsi_spec):
    monitor = BeaconMonitor(MonitorThresholds(idle_expiry_intervals=5.0))
    regular = _report(mmsi_spec)
    monitor.ingest_observation(_obs(0.0, hex_id="0" * 15))
    for index in range(8):
        monitor.ingest(regular, 52.0 * index)
    assert list(monitor.state.histories) == [beacon_key(regular.hex_id)]


def test_great_circle_km():
    assert great_circle_km((0.0, 0.0), (0.0, 1.0)) == pytest.approx(111.19, abs=0.05)
    assert great_circle_km((45.0, 7.0), (45.0, 7.0)) == pytest.approx(0.0, abs=1e-6)
    assert great_circle_km((90.0, 0.0), (-90.0, 0.0)) == pytest.approx(20015.1, abs=0.5)


def test_observation_from_record():
    obs = Observation.from_record({
        'time': 1.5, 'hex_id': 'ABC', 'protocol': 'nat_loc_plb', 'lat': 1.0, 'lon': 2.0,
        'bch1_status': 'clean', 'bch2_status': None,
    })
    assert obs.position == (1.0, 2.0)
    assert obs.time_s == 1.5
    with pytest.raises(MonitorError):
        Observation.from_record({'time': None, 'hex_id': 'ABC', 'protocol': 'unknown'})


def test_alert_stream_is_deterministic(mmsi_spec):
    stream = [(_report(mmsi_spec, 60.0 + i * (1.0 if i % 3 else 0.0), 24.0), 52.0 * i + (i % 2) * 20.0)
              for i in range(8)]

    def run():
        monitor = BeaconMonitor()
        return [alert.to_dict() for report, t in stream for alert in monitor.ingest(report, t)]

    first = run()
    assert first
    assert first == run()
