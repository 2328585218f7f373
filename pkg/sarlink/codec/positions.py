"""Position quantization for the standard and national location protocols.

Coarse fields live in PDF-1, refinement offsets in PDF-2. All quantization
rounds to the nearest unit with ties toward zero.

Standard coarse (21 bits, frame bits 65-85):
    lat sign | lat 1/4 degrees (9) | lon sign | lon 1/4 degrees (10)
Standard offset (20 bits, frame bits 113-132), per axis:
    sign | minutes (5) | 4-second units (4)
National coarse (27 bits, frame bits 59-85):
    lat sign | lat degrees (7) | lat 2-minute units (5) |
    lon sign | lon degrees (8) | lon 2-minute units (5)
National offset (20 bits, frame bits 113-132), per axis:
    sign | minutes (1) | 4-second units (4) | reserved zeros (4)

Sign bits are 1 for south / west. A coarse field of all ones means "no fix";
an offset field whose sign/minutes/seconds bits are all ones means
"no refinement".
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .beacon import Position, PositionError


class PositionScheme(str, Enum):
    STANDARD = "standard"
    NATIONAL = "national"


COARSE_WIDTH = {PositionScheme.STANDARD: 21, PositionScheme.NATIONAL: 27}
OFFSET_WIDTH = 20

COARSE_NO_FIX = {scheme: (1 << width) - 1 for scheme, width in COARSE_WIDTH.items()}
OFFSET_NONE = {
    PositionScheme.STANDARD: (1 << OFFSET_WIDTH) - 1,
    PositionScheme.NATIONAL: (0b1111110000 << 10) | 0b1111110000,
}

# Guaranteed roundtrip error, degrees
COARSE_BOUND = {PositionScheme.STANDARD: 0.125, PositionScheme.NATIONAL: 1.0 / 60.0}
OFFSET_BOUND = 2.0 / 3600.0


@dataclass(frozen=True)
class EncodedPosition:
    """Coarse (PDF-1) and offset (PDF-2) field values of one position."""

    scheme: PositionScheme
    coarse: int
    offset: int

    @property
    def has_fix(self) -> bool:
        return self.coarse != COARSE_NO_FIX[self.scheme]


def _round_half_toward_zero(value: float) -> int:
    # value >= 0
    return int(math.ceil(value - 0.5))


def _encode_offset_axis(residual_deg: float, scheme: PositionScheme) -> int:
    units = _round_half_toward_zero(abs(residual_deg) * 900.0)  # 4-second units
    sign = 1 if residual_deg < 0 and units > 0 else 0
    minutes, seconds4 = divmod(units * 4, 60)
    seconds4 //= 4
    if scheme is PositionScheme.STANDARD:
        return (sign << 9) | (minutes << 4) | seconds4
    return (sign << 9) | (minutes << 8) | (seconds4 << 4)


def _decode_offset_axis(value: int, scheme: PositionScheme) -> float:
    sign = (value >> 9) & 1
    if scheme is PositionScheme.STANDARD:
        minutes, seconds4 = (value >> 4) & 0x1F, value & 0xF
        if minutes > 30:
            raise PositionError(f"offset minutes {minutes} out of range")
    else:
        minutes, seconds4 = (value >> 8) & 0x1, (value >> 4) & 0xF
        if seconds4 > 14:
            raise PositionError(f"offset 4-second units {seconds4} out of range")
    magnitude = minutes / 60.0 + seconds4 * 4.0 / 3600.0
    return -magnitude if sign else magnitude


def _encode_coarse_standard(position: Position) -> Tuple[int, float, float]:
    lat_units = _round_half_toward_zero(abs(position.latitude) * 4.0)
    lon_units = _round_half_toward_zero(abs(position.longitude) * 4.0)
    lat_sign = 1 if position.latitude < 0 and lat_units > 0 else 0
    lon_sign = 1 if position.longitude < 0 and lon_units > 0 else 0
    coarse = (lat_sign << 20) | (lat_units << 11) | (lon_sign << 10) | lon_units
    lat = (-1 if lat_sign else 1) * lat_units / 4.0
    lon = (-1 if lon_sign else 1) * lon_units / 4.0
    return coarse, lat, lon


def _encode_coarse_national(position: Position) -> Tuple[int, float, float]:
    lat_total = _round_half_toward_zero(abs(position.latitude) * 30.0)
    lon_total = _round_half_toward_zero(abs(position.longitude) * 30.0)
    lat_sign = 1 if position.latitude < 0 and lat_total > 0 else 0
    lon_sign = 1 if position.longitude < 0 and lon_total > 0 else 0
    lat_deg, lat_units = divmod(lat_total, 30)
    lon_deg, lon_units = divmod(lon_total, 30)
    coarse = ((lat_sign << 26) | (lat_deg << 19) | (lat_units << 14)
              | (lon_sign << 13) | (lon_deg << 5) | lon_units)
    lat = (-1 if lat_sign else 1) * lat_total / 30.0
    lon = (-1 if lon_sign else 1) * lon_total / 30.0
    return coarse, lat, lon


def encode_position(position: Optional[Position], scheme: PositionScheme) -> EncodedPosition:
    """Quantize a position into coarse and offset field values."""
    scheme = PositionScheme(scheme)
    if position is None:
        return EncodedPosition(scheme, COARSE_NO_FIX[scheme], OFFSET_NONE[scheme])
    if not isinstance(position, Position):
        raise PositionError(f"expected a Position, got {position!r}")

    if scheme is PositionScheme.STANDARD:
        coarse, lat, lon = _encode_coarse_standard(position)
    else:
        coarse, lat, lon = _encode_coarse_national(position)

    offset = ((_encode_offset_axis(position.latitude - lat, scheme) << 10)
              | _encode_offset_axis(position.longitude - lon, scheme))
    return EncodedPosition(scheme, coarse, offset)


def _decode_coarse(coarse: int, scheme: PositionScheme) -> Tuple[float, float]:
    if scheme is PositionScheme.STANDARD:
        lat = ((coarse >> 11) & 0x1FF) / 4.0
        lon = (coarse & 0x3FF) / 4.0
        lat_sign, lon_sign = (coarse >> 20) & 1, (coarse >> 10) & 1
    else:
        lat_units, lon_units = (coarse >> 14) & 0x1F, coarse & 0x1F
        if lat_units > 29 or lon_units > 29:
            raise PositionError("2-minute units out of range")
        lat = ((coarse >> 19) & 0x7F) + lat_units / 30.0
        lon = ((coarse >> 5) & 0xFF) + lon_units / 30.0
        lat_sign, lon_sign = (coarse >> 26) & 1, (coarse >> 13) & 1
    return (-lat if lat_sign else lat), (-lon if lon_sign else lon)


def decode_position(encoded: EncodedPosition, use_offset: bool = True) -> Optional[Position]:
    """Rebuild a position; None for the "no fix" sentinel.

    Raises PositionError when the fields hold values outside the layout's
    ranges (possible only for damaged or hostile frames).
    """
    scheme = PositionScheme(encoded.scheme)
    if not encoded.has_fix:
        return None

    lat, lon = _decode_coarse(encoded.coarse, scheme)
    if use_offset and encoded.offset != OFFSET_NONE[scheme]:
        lat += _decode_offset_axis(encoded.offset >> 10, scheme)
        lon += _decode_offset_axis(encoded.offset & 0x3FF, scheme)

    return Position(lat, lon)
