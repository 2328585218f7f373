"""Stream monitor flagging spoof-like patterns in decoded beacon reports."""

import logging
import math
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Deque, Dict, List, Mapping, Optional, Tuple

from ..codec.bch import CheckStatus
from ..codec.beacon import BeaconProtocol, BeaconReport
from ..codec.protocols import NAT_POSITION, STD_POSITION
from ..frame.bitframe import HEX_ID, PROTOCOL_CODE

EARTH_RADIUS_KM = 6371.0


class MonitorError(ValueError):
    """Invalid monitor input."""


class TimeRegression(MonitorError):
    """A report is older than the previous one."""


class AlertKind(str, Enum):
    DUPLICATE_ID_POSITION_JUMP = "duplicate_id_position_jump"
    INTERVAL_ANOMALY = "interval_anomaly"
    BCH_DEGRADED = "bch_degraded"
    UNKNOWN_PROTOCOL_FLOOD = "unknown_protocol_flood"


class Severity(str, Enum):
    INFO = "info"
    WARN = "warn"
    CRITICAL = "critical"


@dataclass
class Alert:
    """One monitor finding."""

    kind: AlertKind
    hex_id: str
    evidence: Dict[str, Any]
    severity: Severity

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'hex_id': self.hex_id,
            'severity': self.severity.value,
            'evidence': self.evidence,
        }


@dataclass
class MonitorThresholds:
    position_jump_km: float = 50.0
    interval_nominal_s: float = 52.0
    interval_tolerance: float = 0.20
    history_size: int = 64
    unknown_flood_count: int = 5
    unknown_flood_window_s: float = 60.0
    idle_expiry_intervals: float = 10.0
    max_tracked_beacons: int = 10_000


@dataclass
class Observation:
    """The parts of a decoded report the monitor reasons about."""

    time_s: float
    hex_id: str
    protocol: str
    position: Optional[Tuple[float, float]] = None
    bch1_status: str = CheckStatus.CLEAN.value
    bch2_status: Optional[str] = None

    @classmethod
    def from_report(cls, report: BeaconReport, time_s: float) -> 'Observation':
        position = report.decoded_position
        return cls(
            time_s=time_s,
            hex_id=report.hex_id,
            protocol=report.protocol.value,
            position=(position.latitude, position.longitude) if position else None,
            bch1_status=report.bch1.status.value,
            bch2_status=report.bch2.status.value if report.bch2 else None,
        )

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> 'Observation':
        """Build from a decode output record."""
        if record.get('time') is None or record.get('hex_id') is None:
            raise MonitorError(f"record without time or hex_id: {dict(record)}")
        lat, lon = record.get('lat'), record.get('lon')
        return cls(
            time_s=float(record['time']),
            hex_id=str(record['hex_id']),
            protocol=str(record['protocol']),
            position=(float(lat), float(lon)) if lat is not None and lon is not None else None,
            bch1_status=record.get('bch1_status') or CheckStatus.CLEAN.value,
            bch2_status=record.get('bch2_status'),
        )


@dataclass
class IntervalStats:
    """Running count, mean and variance of inter-burst spacing (Welford)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0


@dataclass
class BeaconHistory:
    """Bounded per-id history."""

    observations: Deque[Observation]
    last_fix: Optional[Tuple[float, Tuple[float, float]]] = None
    intervals: IntervalStats = field(default_factory=IntervalStats)

    @property
    def last_time(self) -> Optional[float]:
        return self.observations[-1].time_s if self.observations else None


@dataclass
class MonitorState:
    thresholds: MonitorThresholds = field(default_factory=MonitorThresholds)
    # least recently seen beacon first
    histories: 'OrderedDict[str, BeaconHistory]' = field(default_factory=OrderedDict)
    unknown_times: Deque[float] = field(default_factory=deque)
    flood_active: bool = False
    last_time: Optional[float] = None

    def history(self, key: str) -> BeaconHistory:
        if key in self.histories:
            self.histories.move_to_end(key)
        else:
            self.histories[key] = BeaconHistory(deque(maxlen=self.thresholds.history_size))
        return self.histories[key]

    def expire(self, now_s: float) -> int:
        """Drop beacons idle for too long, then the oldest beyond the tracking cap."""
        idle_limit = self.thresholds.idle_expiry_intervals * self.thresholds.interval_nominal_s
        dropped = 0
        while self.histories:
            oldest = next(iter(self.histories.values()))
            idle = oldest.last_time is not None and now_s - oldest.last_time > idle_limit
            if not idle and len(self.histories) <= self.thresholds.max_tracked_beacons:
                break
            self.histories.popitem(last=False)
            dropped += 1
        return dropped


def beacon_key(hex_id: str) -> str:
    """The 15-hex ID with its coarse-position bits set to the no-fix default.

    Location protocols carry the coarse position inside bits 26-85, so a
    moving (or spoofed) beacon changes its raw hex ID from cell to cell.
    """
    try:
        value = int(hex_id, 16)
    except ValueError:
        return hex_id
    protocol = BeaconProtocol.from_code((value >> (HEX_ID.last_bit - PROTOCOL_CODE.last_bit)) & 0xF)
    if protocol is BeaconProtocol.UNKNOWN:
        return hex_id
    width = (NAT_POSITION if protocol.is_national else STD_POSITION).width
    return f"{value | ((1 << width) - 1):015X}"


def great_circle_km(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    """Spherical law of cosines distance between (lat, lon) pairs in degrees."""
    lat1, lon1, lat2, lon2 = (math.radians(v) for v in (*a, *b))
    cosine = (math.sin(lat1) * math.sin(lat2)
              + math.cos(lat1) * math.cos(lat2) * math.cos(lon2 - lon1))
    return EARTH_RADIUS_KM * math.acos(max(-1.0, min(1.0, cosine)))


class BeaconMonitor:
    """Single-writer monitor over one report stream."""

    def __init__(self, thresholds: Optional[MonitorThresholds] = None):
        self.state = MonitorState(thresholds or MonitorThresholds())
        self.logger = logging.getLogger(__name__)

    @property
    def thresholds(self) -> MonitorThresholds:
        return self.state.thresholds

    def ingest(self, report: BeaconReport, time_s: float) -> List[Alert]:
        """Update state with one report and return the alerts it raises."""
        return self.ingest_observation(Observation.from_report(report, time_s))

    def ingest_observation(self, obs: Observation) -> List[Alert]:
        state = self.state
        if state.last_time is not None and obs.time_s < state.last_time:
            raise TimeRegression(f"report at {obs.time_s} s precedes previous report at {state.last_time} s")
        state.last_time = obs.time_s

        alerts = self._check_bch(obs)
        if obs.protocol == BeaconProtocol.UNKNOWN.value:
            alerts += self._check_unknown_flood(obs)
        else:
            alerts += self._check_history(obs)

        dropped = state.expire(obs.time_s)
        if dropped:
            self.logger.debug(f"expired {dropped} idle beacon history(ies), tracking {len(state.histories)}")

        for alert in alerts:
            self.logger.log(logging.WARNING if alert.severity is not Severity.INFO else logging.INFO,
                            f"{alert.kind.value} [{alert.severity.value}] {alert.hex_id}: {alert.evidence}")
        return alerts

    def _evidence(self, times: List[float], **details) -> Dict[str, Any]:
        evidence = {'times': times, 'signal_strength_check': 'not_performed'}
        evidence.update(details)
        return evidence

    def _check_bch(self, obs: Observation) -> List[Alert]:
        statuses = [obs.bch1_status] + ([obs.bch2_status] if obs.bch2_status else [])
        if CheckStatus.UNCORRECTABLE.value in statuses:
            severity = Severity.WARN
        elif CheckStatus.CORRECTED.value in statuses:
            severity = Severity.INFO
        else:
            return []
        evidence = self._evidence([obs.time_s], bch1_status=obs.bch1_status, bch2_status=obs.bch2_status)
        return [Alert(AlertKind.BCH_DEGRADED, obs.hex_id, evidence, severity)]

    def _check_unknown_flood(self, obs: Observation) -> List[Alert]:
        state, thresholds = self.state, self.thresholds
        state.unknown_times.append(obs.time_s)
        while state.unknown_times and obs.time_s - state.unknown_times[0] > thresholds.unknown_flood_window_s:
            state.unknown_times.popleft()

        if len(state.unknown_times) <= thresholds.unknown_flood_count:
            state.flood_active = False
            return []
        if state.flood_active:
            return []
        state.flood_active = True
        evidence = self._evidence(list(state.unknown_times), count=len(state.unknown_times),
                                  window_s=thresholds.unknown_flood_window_s)
        return [Alert(AlertKind.UNKNOWN_PROTOCOL_FLOOD, obs.hex_id, evidence, Severity.WARN)]

    def _check_history(self, obs: Observation) -> List[Alert]:
        thresholds = self.thresholds
        history = self.state.history(beacon_key(obs.hex_id))
        alerts = []

        previous = history.last_time
        if previous is not None:
            spacing = obs.time_s - previous
            history.intervals.update(spacing)
            nominal = thresholds.interval_nominal_s
            multiple = max(1, round(spacing / nominal))
            deviation = abs(spacing - multiple * nominal) / nominal
            if deviation > thresholds.interval_tolerance:
                evidence = self._evidence(
                    [previous, obs.time_s], spacing_s=spacing, expected_s=multiple * nominal,
                    deviation=deviation, interval_mean_s=history.intervals.mean,
                    interval_variance=history.intervals.variance)
                alerts.append(Alert(AlertKind.INTERVAL_ANOMALY, obs.hex_id, evidence, Severity.WARN))

        if obs.position is not None:
            if history.last_fix is not None:
                fix_time, fix_position = history.last_fix
                distance = great_circle_km(fix_position, obs.position)
                if (distance > thresholds.position_jump_km
                        and obs.time_s - fix_time <= thresholds.interval_nominal_s):
                    evidence = self._evidence(
                        [fix_time, obs.time_s], distance_km=distance,
                        previous_position=list(fix_position), position=list(obs.position))
                    alerts.append(Alert(AlertKind.DUPLICATE_ID_POSITION_JUMP, obs.hex_id, evidence,
                                        Severity.CRITICAL))
            history.last_fix = (obs.time_s, obs.position)

        history.observations.append(obs)
        return alerts
