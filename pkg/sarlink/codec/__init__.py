"""Beacon message codec: BCH codes, protocol layouts and position quantization."""

from .bch import (
    BchCode, BchError, WrongLength, CheckStatus, CheckResult,
    gen_polys, parity, syndrome, check_and_correct,
)
from .beacon import (
    BeaconProtocol, BeaconSpec, BeaconReport, BeaconIdentity,
    MmsiTail, Icao24, SerialId, NationalId, Position,
    BeaconSpecError, PositionError, CountryError,
    SUPPORTED_PROTOCOLS, identity_type_for,
)
from .positions import PositionScheme, EncodedPosition, encode_position, decode_position
from .mid_table import MidTable, country_name
from .protocols import encode_beacon, decode_frame, refresh_parity

__all__ = [
    'BchCode', 'BchError', 'WrongLength', 'CheckStatus', 'CheckResult',
    'gen_polys', 'parity', 'syndrome', 'check_and_correct',
    'BeaconProtocol', 'BeaconSpec', 'BeaconReport', 'BeaconIdentity',
    'MmsiTail', 'Icao24', 'SerialId', 'NationalId', 'Position',
    'BeaconSpecError', 'PositionError', 'CountryError',
    'SUPPORTED_PROTOCOLS', 'identity_type_for',
    'PositionScheme', 'EncodedPosition', 'encode_position', 'decode_position',
    'MidTable', 'country_name',
    'encode_beacon', 'decode_frame', 'refresh_parity',
]
