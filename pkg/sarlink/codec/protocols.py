"""Semantic codec between BeaconSpec / BeaconReport and frame bits."""

import logging
from typing import Dict, List, Optional, Tuple

from ..frame.bitframe import (
    BCH1_PARITY, BCH2_PARITY, COUNTRY, FORMAT_FLAG, HEX_ID, LONG_LENGTH, NON_PROTECTED,
    PDF1, PDF2, PROTOCOL_CODE, PROTOCOL_FLAG, FieldWindow, Frame, FrameFormat,
    field_access, hex_id_of,
)
from .bch import CheckResult, check_and_correct, gen_polys, parity
from .beacon import (
    BeaconProtocol, BeaconReport, BeaconSpec, BeaconSpecError, PositionError,
    identity_type_for,
)
from .mid_table import default_mid_table
from .positions import EncodedPosition, PositionScheme, decode_position, encode_position

logger = logging.getLogger(__name__)

# Protocol-specific windows
STD_IDENTITY = FieldWindow("identity", 41, 64)
NAT_IDENTITY = FieldWindow("national_id", 41, 58)
STD_POSITION = FieldWindow("position", 65, 85)
NAT_POSITION = FieldWindow("position", 59, 85)
PDF2_MARKER = FieldWindow("pdf2_marker", 107, 110)
PDF2_FLAG = FieldWindow("pdf2_flag", 111, 111)
HOMING = FieldWindow("homing", 112, 112)
OFFSETS = FieldWindow("offsets", 113, 132)
LAT_OFFSET = FieldWindow("lat_offset", 113, 122)
LON_OFFSET = FieldWindow("lon_offset", 123, 132)

PDF2_MARKER_VALUE = 0b1101


def _windows_for(protocol: BeaconProtocol) -> Tuple[FieldWindow, FieldWindow, PositionScheme]:
    if protocol.is_national:
        return NAT_IDENTITY, NAT_POSITION, PositionScheme.NATIONAL
    return STD_IDENTITY, STD_POSITION, PositionScheme.STANDARD


def _span(window: FieldWindow) -> slice:
    return slice(window.first_bit - 1, window.last_bit)


def refresh_parity(frame: Frame) -> Frame:
    """Recompute BCH-1 (and for long frames BCH-2) parity in place."""
    bch1, bch2 = gen_polys()
    frame.bits[_span(BCH1_PARITY)] = parity(frame.bits[_span(PDF1)], bch1)
    if len(frame) == LONG_LENGTH:
        frame.bits[_span(BCH2_PARITY)] = parity(frame.bits[_span(PDF2)], bch2)
    return frame


def encode_beacon(spec: BeaconSpec) -> Frame:
    """Encode a beacon spec into a frame with valid BCH parity."""
    spec.validate()
    frame = Frame.blank(spec.format, spec.mode)

    field_access(frame, PROTOCOL_FLAG, 0)
    field_access(frame, COUNTRY, spec.country)
    field_access(frame, PROTOCOL_CODE, spec.protocol.code)

    identity_window, position_window, scheme = _windows_for(spec.protocol)
    field_access(frame, identity_window, spec.identity.value)

    encoded = encode_position(spec.position, scheme)
    field_access(frame, position_window, encoded.coarse)

    if FrameFormat(spec.format) is FrameFormat.LONG:
        flag = spec.additional_data if spec.protocol.is_national else spec.position_source_internal
        field_access(frame, PDF2_MARKER, PDF2_MARKER_VALUE)
        field_access(frame, PDF2_FLAG, int(flag))
        field_access(frame, HOMING, int(spec.homing))
        field_access(frame, OFFSETS, encoded.offset)

    return refresh_parity(frame)


def _check_codewords(frame: Frame) -> Tuple[Frame, CheckResult, Optional[CheckResult]]:
    """Run both BCH checks; return the frame with usable corrections applied."""
    bch1, bch2 = gen_polys()
    working = frame.copy()

    span1 = slice(PDF1.first_bit - 1, BCH1_PARITY.last_bit)
    result1 = check_and_correct(frame.bits[span1], bch1)
    if result1.usable:
        working.bits[span1] = result1.corrected_codeword

    result2 = None
    if len(frame) == LONG_LENGTH:
        span2 = slice(PDF2.first_bit - 1, BCH2_PARITY.last_bit)
        result2 = check_and_correct(frame.bits[span2], bch2)
        if result2.usable:
            working.bits[span2] = result2.corrected_codeword

    return working, result1, result2


def _raw_fields(frame: Frame, identity_window: FieldWindow, position_window: FieldWindow) -> Dict[str, int]:
    windows = [FORMAT_FLAG, PROTOCOL_FLAG, COUNTRY, PROTOCOL_CODE, HEX_ID,
               identity_window, position_window, BCH1_PARITY]
    if len(frame) == LONG_LENGTH:
        windows += [PDF2_MARKER, PDF2_FLAG, HOMING, LAT_OFFSET, LON_OFFSET, BCH2_PARITY]
    else:
        windows.append(NON_PROTECTED)
    return {window.name: field_access(frame, window) for window in windows}


def decode_frame(frame: Frame) -> BeaconReport:
    """Decode a frame into a report.

    Total over frame content: damaged sync, stale parity, unknown protocol
    codes and out-of-range fields are reported through the BCH statuses and
    ``notes`` instead of raising.
    """
    if not isinstance(frame, Frame):
        frame = Frame(frame)

    working, result1, result2 = _check_codewords(frame)
    notes: List[str] = []

    if working.mode is None:
        notes.append("sync pattern damaged")
    frame_format = working.format
    if field_access(working, FORMAT_FLAG) != (1 if frame_format is FrameFormat.LONG else 0):
        notes.append(f"format flag disagrees with {len(working)}-bit length")
    if not result1.usable:
        notes.append("BCH-1 uncorrectable, fields decoded from received bits")
    if result2 is not None and not result2.usable:
        notes.append("BCH-2 uncorrectable, PDF-2 decoded from received bits")

    protocol_code = field_access(working, PROTOCOL_CODE)
    protocol = BeaconProtocol.from_code(protocol_code)
    if field_access(working, PROTOCOL_FLAG) != 0:
        protocol = BeaconProtocol.UNKNOWN
        notes.append("protocol flag set (user protocol)")
    elif protocol is BeaconProtocol.UNKNOWN:
        notes.append(f"unsupported protocol code {protocol_code:04b}")

    identity_window, position_window, scheme = _windows_for(protocol)
    country = field_access(working, COUNTRY)
    report = BeaconReport(
        protocol=protocol,
        protocol_code=protocol_code,
        country=country,
        country_name=default_mid_table().lookup(country),
        identity=None,
        homing=False,
        position_source_internal=False,
        additional_data=False,
        mode=working.mode,
        format=frame_format,
        hex_id=hex_id_of(working),
        bch1=result1,
        bch2=result2,
        decoded_position=None,
        raw_frame=working,
        received_frame=frame,
        raw_fields=_raw_fields(working, identity_window, position_window),
        notes=notes,
    )
    if protocol is BeaconProtocol.UNKNOWN:
        return report

    identity_type = identity_type_for(protocol)
    try:
        report.identity = identity_type.from_value(field_access(working, identity_window))
    except BeaconSpecError as e:
        notes.append(f"identity out of range: {e}")

    use_offset = False
    if frame_format is FrameFormat.LONG:
        flag = bool(field_access(working, PDF2_FLAG))
        report.homing = bool(field_access(working, HOMING))
        if protocol.is_national:
            report.additional_data = flag
        else:
            report.position_source_internal = flag
        use_offset = field_access(working, PDF2_MARKER) == PDF2_MARKER_VALUE
        if not use_offset:
            notes.append("PDF-2 marker missing, offsets ignored")

    encoded = EncodedPosition(
        scheme,
        field_access(working, position_window),
        field_access(working, OFFSETS) if frame_format is FrameFormat.LONG else 0,
    )
    try:
        report.decoded_position = decode_position(encoded, use_offset=use_offset)
    except PositionError as e:
        notes.append(f"position out of range: {e}")

    if notes:
        logger.debug(f"{report.hex_id}: {'; '.join(notes)}")
    return report
