"""Key/value text format for beacon specs and spoof overrides."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..codec.beacon import (
    BeaconProtocol, BeaconSpec, BeaconSpecError, Icao24, MmsiTail, NationalId, Position,
    SerialId,
)
from ..frame.bitframe import FrameFormat, FrameMode


class SpecSyntaxError(BeaconSpecError):
    """Malformed spec text."""


IDENTITY_KEYS = {
    MmsiTail: ('mmsi_tail', 'specific_beacon'),
    Icao24: ('icao24',),
    SerialId: ('serial', 'auxiliary'),
    NationalId: ('national_id',),
}
FLAG_KEYS = ('homing', 'position_source_internal', 'additional_data')
KNOWN_KEYS = {'protocol', 'country', 'latitude', 'longitude', 'mode', 'format', *FLAG_KEYS,
              *(key for keys in IDENTITY_KEYS.values() for key in keys)}

_TRUE = {'true', 'yes', '1', 'on'}
_FALSE = {'false', 'no', '0', 'off'}


class SpecParser:
    """Parses and formats the ``key = value`` beacon spec text."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def read_pairs(self, text: str) -> Dict[str, str]:
        """Split text into key/value pairs; ``#`` starts a comment."""
        pairs: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            key, value = key.strip().lower(), value.strip()
            if not sep or not key:
                raise SpecSyntaxError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
            if key not in KNOWN_KEYS:
                raise SpecSyntaxError(f"line {number}: unknown key {key!r}")
            if key in pairs:
                raise SpecSyntaxError(f"line {number}: duplicate key {key!r}")
            pairs[key] = value
        return pairs

    def _int(self, pairs: Dict[str, str], key: str, base: int = 10, default: Optional[int] = None) -> int:
        if key not in pairs:
            if default is None:
                raise SpecSyntaxError(f"missing key {key!r}")
            return default
        try:
            return int(pairs[key], base)
        except ValueError as e:
            raise SpecSyntaxError(f"{key}: not an integer: {pairs[key]!r}") from e

    def _bool(self, value: str, key: str) -> bool:
        if value.lower() in _TRUE:
            return True
        if value.lower() in _FALSE:
            return False
        raise SpecSyntaxError(f"{key}: expected true or false, got {value!r}")

    def _enum(self, enum_class, value: str, key: str):
        try:
            return enum_class(value.strip().lower())
        except ValueError as e:
            choices = ", ".join(member.value for member in enum_class)
            raise SpecSyntaxError(f"{key}: {value!r} is not one of {choices}") from e

    def _identity(self, pairs: Dict[str, str], protocol: BeaconProtocol):
        if protocol is BeaconProtocol.UNKNOWN:
            raise SpecSyntaxError("protocol 'unknown' cannot be encoded")
        if protocol.is_national:
            identity_type = NationalId
        elif protocol is BeaconProtocol.STD_LOC_ELT_ICAO24:
            identity_type = Icao24
        elif protocol is BeaconProtocol.STD_LOC_EPIRB_MMSI:
            identity_type = MmsiTail
        else:
            identity_type = SerialId

        foreign = [key for other, keys in IDENTITY_KEYS.items() if other is not identity_type
                   for key in keys if key in pairs]
        if foreign:
            raise SpecSyntaxError(f"key(s) {foreign} do not apply to protocol {protocol.value}")

        if identity_type is MmsiTail:
            return MmsiTail(self._int(pairs, 'mmsi_tail'), self._int(pairs, 'specific_beacon', default=0))
        if identity_type is Icao24:
            return Icao24(self._int(pairs, 'icao24', base=16))
        if identity_type is SerialId:
            return SerialId(self._int(pairs, 'serial'), self._int(pairs, 'auxiliary', default=0))
        return NationalId(self._int(pairs, 'national_id'))

    def _position(self, pairs: Dict[str, str]) -> Optional[Position]:
        present = [key for key in ('latitude', 'longitude') if key in pairs]
        if not present:
            return None
        if len(present) == 1:
            raise SpecSyntaxError("latitude and longitude must be given together")
        try:
            return Position(float(pairs['latitude']), float(pairs['longitude']))
        except ValueError as e:
            raise SpecSyntaxError(f"position: {e}") from e

    def to_fields(self, pairs: Dict[str, str], protocol: Optional[BeaconProtocol] = None) -> Dict[str, Any]:
        """BeaconSpec keyword arguments for the keys present in ``pairs``.

        ``protocol`` supplies the protocol for identity keys when the text
        does not name one (spoof overrides on a base spec).
        """
        fields: Dict[str, Any] = {}
        if 'protocol' in pairs:
            protocol = fields['protocol'] = self._enum(BeaconProtocol, pairs['protocol'], 'protocol')
        if 'country' in pairs:
            fields['country'] = self._int(pairs, 'country')
        if any(key in pairs for keys in IDENTITY_KEYS.values() for key in keys) or 'protocol' in pairs:
            if protocol is None:
                raise SpecSyntaxError("identity keys need a protocol")
            fields['identity'] = self._identity(pairs, protocol)
        position = self._position(pairs)
        if position is not None:
            fields['position'] = position
        for key in FLAG_KEYS:
            if key in pairs:
                fields[key] = self._bool(pairs[key], key)
        if 'mode' in pairs:
            fields['mode'] = self._enum(FrameMode, pairs['mode'], 'mode')
        if 'format' in pairs:
            fields['format'] = self._enum(FrameFormat, pairs['format'], 'format')
        return fields

    def parse_text(self, text: str) -> BeaconSpec:
        """Parse a complete spec and check its invariants."""
        return self.parse_pairs(self.read_pairs(text))

    def parse_pairs(self, pairs: Dict[str, str]) -> BeaconSpec:
        if 'protocol' not in pairs:
            raise SpecSyntaxError("missing key 'protocol'")
        if 'country' not in pairs:
            raise SpecSyntaxError("missing key 'country'")
        spec = BeaconSpec(**self.to_fields(pairs))
        spec.validate()
        self.logger.debug(f"Parsed spec: {spec}")
        return spec

    def parse_file(self, path: Union[str, Path]) -> BeaconSpec:
        return self.parse_text(Path(path).read_text())

    def parse_overrides(self, text: str, base: BeaconSpec) -> Dict[str, Any]:
        """Parse a partial spec into overrides of ``base``."""
        return self.to_fields(self.read_pairs(text), base.protocol)

    def format_spec(self, spec: BeaconSpec) -> str:
        """Render a spec in the text format accepted by ``parse_text``."""
        lines = [f"protocol = {spec.protocol.value}", f"country = {spec.country}"]
        identity = spec.identity
        if isinstance(identity, MmsiTail):
            lines += [f"mmsi_tail = {identity.last6digits}", f"specific_beacon = {identity.specific_beacon}"]
        elif isinstance(identity, Icao24):
            lines.append(f"icao24 = {identity.address:06X}")
        elif isinstance(identity, SerialId):
            lines += [f"serial = {identity.serial}", f"auxiliary = {identity.auxiliary}"]
        else:
            lines.append(f"national_id = {identity.number}")
        if spec.position is not None:
            lines += [f"latitude = {spec.position.latitude!r}", f"longitude = {spec.position.longitude!r}"]
        lines += [f"{key} = {str(getattr(spec, key)).lower()}" for key in FLAG_KEYS]
        lines += [f"mode = {FrameMode(spec.mode).value}", f"format = {FrameFormat(spec.format).value}"]
        return "\n".join(lines) + "\n"
