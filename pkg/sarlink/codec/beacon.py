"""Typed beacon content: protocols, identities, positions, specs and reports."""

import math
import numbers
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Union

from ..frame.bitframe import Frame, FrameFormat, FrameMode
from .bch import CheckResult, CheckStatus


class BeaconSpecError(ValueError):
    """A BeaconSpec violates its invariants."""


class PositionError(BeaconSpecError):
    """Coordinates out of range, not finite, or not representable."""


class CountryError(BeaconSpecError):
    """Country code (MID) outside 0-1023."""


class BeaconProtocol(str, Enum):
    STD_LOC_EPIRB_MMSI = "std_loc_epirb_mmsi"
    STD_LOC_ELT_ICAO24 = "std_loc_elt_icao24"
    STD_LOC_ELT_SERIAL = "std_loc_elt_serial"
    STD_LOC_EPIRB_SERIAL = "std_loc_epirb_serial"
    STD_LOC_PLB_SERIAL = "std_loc_plb_serial"
    NAT_LOC_ELT = "nat_loc_elt"
    NAT_LOC_EPIRB = "nat_loc_epirb"
    NAT_LOC_PLB = "nat_loc_plb"
    UNKNOWN = "unknown"

    @property
    def code(self) -> Optional[int]:
        """4-bit protocol code carried in bits 37-40."""
        return PROTOCOL_CODES.get(self)

    @property
    def is_national(self) -> bool:
        return self in NATIONAL_PROTOCOLS

    @classmethod
    def from_code(cls, code: int) -> 'BeaconProtocol':
        for protocol, protocol_code in PROTOCOL_CODES.items():
            if protocol_code == code:
                return protocol
        return cls.UNKNOWN


PROTOCOL_CODES = {
    BeaconProtocol.STD_LOC_EPIRB_MMSI: 0b0010,
    BeaconProtocol.STD_LOC_ELT_ICAO24: 0b0011,
    BeaconProtocol.STD_LOC_ELT_SERIAL: 0b0100,
    BeaconProtocol.STD_LOC_EPIRB_SERIAL: 0b0110,
    BeaconProtocol.STD_LOC_PLB_SERIAL: 0b0111,
    BeaconProtocol.NAT_LOC_ELT: 0b1000,
    BeaconProtocol.NAT_LOC_EPIRB: 0b1010,
    BeaconProtocol.NAT_LOC_PLB: 0b1011,
}

NATIONAL_PROTOCOLS = frozenset({
    BeaconProtocol.NAT_LOC_ELT,
    BeaconProtocol.NAT_LOC_EPIRB,
    BeaconProtocol.NAT_LOC_PLB,
})

SUPPORTED_PROTOCOLS = tuple(PROTOCOL_CODES)


def _check_width(name: str, value: int, bits: int, upper: Optional[int] = None):
    limit = (1 << bits) - 1 if upper is None else upper
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or not 0 <= value <= limit:
        raise BeaconSpecError(f"{name} must be an integer in 0..{limit}, got {value!r}")


@dataclass(frozen=True)
class MmsiTail:
    """Last six MMSI digits plus a 4-bit specific-beacon number."""

    last6digits: int
    specific_beacon: int = 0

    def __post_init__(self):
        _check_width("last6digits", self.last6digits, 20, 999999)
        _check_width("specific_beacon", self.specific_beacon, 4)

    @property
    def value(self) -> int:
        return (self.last6digits << 4) | self.specific_beacon

    @classmethod
    def from_value(cls, value: int) -> 'MmsiTail':
        return cls(value >> 4, value & 0xF)


@dataclass(frozen=True)
class Icao24:
    """24-bit ICAO aircraft address."""

    address: int

    def __post_init__(self):
        _check_width("icao24", self.address, 24)

    @property
    def value(self) -> int:
        return self.address

    @classmethod
    def from_value(cls, value: int) -> 'Icao24':
        return cls(value)


@dataclass(frozen=True)
class SerialId:
    """20-bit serial number plus 4 auxiliary bits."""

    serial: int
    auxiliary: int = 0

    def __post_init__(self):
        _check_width("serial", self.serial, 20)
        _check_width("auxiliary", self.auxiliary, 4)

    @property
    def value(self) -> int:
        return (self.serial << 4) | self.auxiliary

    @classmethod
    def from_value(cls, value: int) -> 'SerialId':
        return cls(value >> 4, value & 0xF)


@dataclass(frozen=True)
class NationalId:
    """18-bit national identification number."""

    number: int

    def __post_init__(self):
        _check_width("national_id", self.number, 18)

    @property
    def value(self) -> int:
        return self.number

    @classmethod
    def from_value(cls, value: int) -> 'NationalId':
        return cls(value)


BeaconIdentity = Union[MmsiTail, Icao24, SerialId, NationalId]


def identity_type_for(protocol: BeaconProtocol) -> Optional[type]:
    """Identity variant carried by a protocol."""
    if protocol.is_national:
        return NationalId
    if protocol is BeaconProtocol.STD_LOC_ELT_ICAO24:
        return Icao24
    if protocol is BeaconProtocol.STD_LOC_EPIRB_MMSI:
        return MmsiTail
    if protocol is BeaconProtocol.UNKNOWN:
        return None
    return SerialId


@dataclass(frozen=True)
class Position:
    """Geographic position in degrees (north and east positive)."""

    latitude: float
    longitude: float

    def __post_init__(self):
        for name, value, limit in (("latitude", self.latitude, 90.0), ("longitude", self.longitude, 180.0)):
            if not isinstance(value, numbers.Real) or not math.isfinite(value) or abs(value) > limit:
                raise PositionError(f"{name} must be a finite value within ±{limit}, got {value!r}")


@dataclass(frozen=True)
class BeaconSpec:
    """Semantic content of a beacon message before encoding."""

    protocol: BeaconProtocol
    country: int
    identity: BeaconIdentity
    position: Optional[Position] = None
    homing: bool = False
    position_source_internal: bool = False
    additional_data: bool = False
    mode: FrameMode = FrameMode.NORMAL
    format: FrameFormat = FrameFormat.LONG

    def validate(self) -> None:
        """Raise BeaconSpecError unless every invariant holds."""
        if not isinstance(self.protocol, BeaconProtocol) or self.protocol is BeaconProtocol.UNKNOWN:
            raise BeaconSpecError(f"unsupported protocol {self.protocol!r}")
        if not isinstance(self.country, numbers.Integral) or isinstance(self.country, bool) or not 0 <= self.country <= 1023:
            raise CountryError(f"country must be in 0..1023, got {self.country!r}")

        expected = identity_type_for(self.protocol)
        if not isinstance(self.identity, expected):
            raise BeaconSpecError(
                f"{self.protocol.value} carries {expected.__name__}, got {type(self.identity).__name__}")

        if self.position is not None and not isinstance(self.position, Position):
            raise PositionError(f"position must be a Position, got {self.position!r}")

        try:
            frame_format = FrameFormat(self.format)
            FrameMode(self.mode)
        except ValueError as e:
            raise BeaconSpecError(str(e)) from e
        if frame_format is FrameFormat.SHORT:
            if self.position is not None:
                raise BeaconSpecError("a position requires the long format")
            if self.homing or self.position_source_internal or self.additional_data:
                raise BeaconSpecError("short frames carry no PDF-2 flags")

        if self.protocol.is_national and self.position_source_internal:
            raise BeaconSpecError("national location protocols carry no position-source flag")
        if not self.protocol.is_national and self.additional_data:
            raise BeaconSpecError("standard location protocols carry no additional-data flag")


@dataclass
class BeaconReport:
    """Decoder output for one frame."""

    protocol: BeaconProtocol
    protocol_code: int
    country: int
    country_name: Optional[str]
    identity: Optional[BeaconIdentity]
    homing: bool
    position_source_internal: bool
    additional_data: bool
    mode: Optional[FrameMode]
    format: FrameFormat
    hex_id: str
    bch1: CheckResult
    bch2: Optional[CheckResult]
    decoded_position: Optional[Position]
    raw_frame: Frame
    received_frame: Frame
    raw_fields: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def position(self) -> Optional[Position]:
        return self.decoded_position

    @property
    def clean(self) -> bool:
        """Both BCH checks passed without correction."""
        return self.bch1.status is CheckStatus.CLEAN and (
            self.bch2 is None or self.bch2.status is CheckStatus.CLEAN)

    def to_spec(self) -> BeaconSpec:
        """Rebuild the semantic spec (decoded position, quantized)."""
        if self.protocol is BeaconProtocol.UNKNOWN or self.identity is None or self.mode is None:
            raise BeaconSpecError("report does not carry a supported beacon")
        return BeaconSpec(
            protocol=self.protocol,
            country=self.country,
            identity=self.identity,
            position=self.decoded_position,
            homing=self.homing,
            position_source_internal=self.position_source_internal,
            additional_data=self.additional_data,
            mode=self.mode,
            format=self.format,
        )
