"""JSON-lines decode records."""

import json
import logging
from typing import Any, Dict, Optional, TextIO

from ..codec.beacon import BeaconReport
from ..radio.modem import DetectedBurst

RECORD_KEYS = (
    'time', 'hex_id', 'protocol', 'country', 'lat', 'lon', 'mode',
    'bch1_status', 'bch2_status', 'cfo_hz', 'snr_db',
)


def decode_record(report: BeaconReport, time_s: Optional[float] = None,
                  burst: Optional[DetectedBurst] = None) -> Dict[str, Any]:
    """The output record of one decoded frame; absent values are None."""
    position = report.decoded_position
    return {
        'time': None if time_s is None else round(float(time_s), 6),
        'hex_id': report.hex_id,
        'protocol': report.protocol.value,
        'country': report.country,
        'lat': None if position is None else round(position.latitude, 6),
        'lon': None if position is None else round(position.longitude, 6),
        'mode': None if report.mode is None else report.mode.value,
        'bch1_status': report.bch1.status.value,
        'bch2_status': None if report.bch2 is None else report.bch2.status.value,
        'cfo_hz': None if burst is None else round(burst.cfo_hz, 3),
        'snr_db': None if burst is None else round(burst.snr_db, 2),
    }


class ReportWriter:
    """Writes one JSON record per line to a text stream."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.count = 0
        self.logger = logging.getLogger(__name__)

    def write(self, report: BeaconReport, time_s: Optional[float] = None,
              burst: Optional[DetectedBurst] = None) -> Dict[str, Any]:
        record = decode_record(report, time_s, burst)
        self.write_record(record)
        return record

    def write_record(self, record: Dict[str, Any]) -> None:
        self.stream.write(json.dumps(record) + "\n")
        self.count += 1

    def close(self) -> None:
        self.stream.flush()
        self.logger.info(f"Wrote {self.count} record(s)")
