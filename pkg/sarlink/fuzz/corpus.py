"""Seeded generation of valid, boundary and hostile frame corpora."""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..codec.beacon import (
    SUPPORTED_PROTOCOLS, BeaconProtocol, BeaconSpec, Icao24, MmsiTail, NationalId,
    Position, SerialId,
)
from ..codec.protocols import encode_beacon, refresh_parity
from ..frame.bitframe import (
    BCH1_PARITY, FORMAT_FLAG, PDF1, PREAMBLE_LENGTH, PROTOCOL_CODE, Frame, FrameFormat,
    FrameMode, field_access, frame_from_hex, frame_to_hex,
)

logger = logging.getLogger(__name__)

CORPUS_HEADER = "# sarlink-corpus"

UNSUPPORTED_CODES = tuple(code for code in range(16)
                          if BeaconProtocol.from_code(code) is BeaconProtocol.UNKNOWN)

BOUNDARY_POSITIONS = (
    Position(-90.0, 180.0),
    Position(90.0, -180.0),
    Position(0.0, 0.0),
    Position(-90.0, -180.0),
    Position(90.0, 180.0),
    None,
)


class CorpusProfile(str, Enum):
    VALID = "valid"
    BOUNDARY = "boundary"
    HOSTILE = "hostile"


class HostileKind(str, Enum):
    BCH_STALE = "bch_stale"
    UNKNOWN_PROTOCOL = "unknown_protocol"
    SYNC_DAMAGED = "sync_damaged"
    FORMAT_MISMATCH = "format_mismatch"
    RANDOM_BITS = "random_bits"


@dataclass
class CorpusItem:
    """A generated frame and the kind of content it carries."""

    frame: Frame
    kind: str


def random_identity(protocol: BeaconProtocol, rng: np.random.Generator):
    if protocol.is_national:
        return NationalId(int(rng.integers(1 << 18)))
    if protocol is BeaconProtocol.STD_LOC_ELT_ICAO24:
        return Icao24(int(rng.integers(1 << 24)))
    if protocol is BeaconProtocol.STD_LOC_EPIRB_MMSI:
        return MmsiTail(int(rng.integers(1000000)), int(rng.integers(16)))
    return SerialId(int(rng.integers(1 << 20)), int(rng.integers(16)))


def _extreme_identity(protocol: BeaconProtocol, maximum: bool):
    if protocol.is_national:
        return NationalId((1 << 18) - 1 if maximum else 0)
    if protocol is BeaconProtocol.STD_LOC_ELT_ICAO24:
        return Icao24((1 << 24) - 1 if maximum else 0)
    if protocol is BeaconProtocol.STD_LOC_EPIRB_MMSI:
        return MmsiTail(999999, 15) if maximum else MmsiTail(0, 0)
    return SerialId((1 << 20) - 1, 15) if maximum else SerialId(0, 0)


def random_spec(rng: np.random.Generator, protocol: Optional[BeaconProtocol] = None,
                frame_format: Optional[FrameFormat] = None) -> BeaconSpec:
    """A random BeaconSpec that passes BeaconSpec.validate()."""
    if protocol is None:
        protocol = SUPPORTED_PROTOCOLS[int(rng.integers(len(SUPPORTED_PROTOCOLS)))]
    if frame_format is None:
        frame_format = FrameFormat.LONG if rng.random() < 0.75 else FrameFormat.SHORT
    long_format = frame_format is FrameFormat.LONG

    position = None
    if long_format and rng.random() < 0.9:
        position = Position(float(rng.uniform(-90.0, 90.0)), float(rng.uniform(-180.0, 180.0)))

    flags = rng.random(2) < 0.5 if long_format else (False, False)
    return BeaconSpec(
        protocol=protocol,
        country=int(rng.integers(1024)),
        identity=random_identity(protocol, rng),
        position=position,
        homing=bool(flags[0]),
        position_source_internal=bool(flags[1]) and not protocol.is_national,
        additional_data=bool(flags[1]) and protocol.is_national,
        mode=FrameMode.SELF_TEST if rng.random() < 0.1 else FrameMode.NORMAL,
        format=frame_format,
    )


def boundary_spec(index: int) -> BeaconSpec:
    """The index-th spec of the boundary sweep.

    Protocols cycle fastest, then positions (including "no fix"), then
    maximum/zero identities and country codes.
    """
    protocol = SUPPORTED_PROTOCOLS[index % len(SUPPORTED_PROTOCOLS)]
    rest = index // len(SUPPORTED_PROTOCOLS)
    position = BOUNDARY_POSITIONS[rest % len(BOUNDARY_POSITIONS)]
    maximum = (rest // len(BOUNDARY_POSITIONS)) % 2 == 0
    return BeaconSpec(
        protocol=protocol,
        country=1023 if maximum else 0,
        identity=_extreme_identity(protocol, maximum),
        position=position,
        homing=maximum,
        mode=FrameMode.NORMAL,
        format=FrameFormat.LONG,
    )


def _flip_random(bits: np.ndarray, first_bit: int, last_bit: int, count: int,
                 rng: np.random.Generator) -> None:
    positions = rng.choice(np.arange(first_bit - 1, last_bit), size=count, replace=False)
    bits[positions] ^= 1


def hostile_item(index: int, rng: np.random.Generator) -> CorpusItem:
    """A malformed or adversarial frame; kinds cycle with the index."""
    kinds = list(HostileKind)
    kind = kinds[index % len(kinds)]

    if kind is HostileKind.RANDOM_BITS:
        length = 144 if rng.random() < 0.5 else 112
        return CorpusItem(Frame(rng.integers(0, 2, length, dtype=np.uint8)), kind.value)

    frame = encode_beacon(random_spec(rng))
    if kind is HostileKind.BCH_STALE:
        _flip_random(frame.bits, PDF1.first_bit, BCH1_PARITY.last_bit, int(rng.integers(1, 5)), rng)
    elif kind is HostileKind.UNKNOWN_PROTOCOL:
        field_access(frame, PROTOCOL_CODE, UNSUPPORTED_CODES[int(rng.integers(len(UNSUPPORTED_CODES)))])
        refresh_parity(frame)
    elif kind is HostileKind.SYNC_DAMAGED:
        _flip_random(frame.bits, 1, PREAMBLE_LENGTH, int(rng.integers(1, 4)), rng)
    else:
        frame.bits[FORMAT_FLAG.first_bit - 1] ^= 1
        refresh_parity(frame)
    return CorpusItem(frame, kind.value)


def generate_labeled(seed: int, profile: Union[CorpusProfile, str], n: int) -> List[CorpusItem]:
    """Generate ``n`` corpus items with their content kinds."""
    profile = CorpusProfile(profile)
    if n < 1:
        raise ValueError(f"corpus size must be at least 1, got {n}")
    rng = np.random.default_rng(seed)

    if profile is CorpusProfile.VALID:
        items = [CorpusItem(encode_beacon(random_spec(rng)), profile.value) for _ in range(n)]
    elif profile is CorpusProfile.BOUNDARY:
        items = [CorpusItem(encode_beacon(boundary_spec(i)), profile.value) for i in range(n)]
    else:
        items = [hostile_item(i, rng) for i in range(n)]

    logger.info(f"Generated {n} {profile.value} corpus item(s) with seed {seed}")
    return items


def gen_corpus(seed: int, profile: Union[CorpusProfile, str], n: int) -> List[Frame]:
    """Generate ``n`` frames of a corpus profile, deterministic per seed."""
    return [item.frame for item in generate_labeled(seed, profile, n)]


def corpus_header(seed: int, profile: Union[CorpusProfile, str], count: int) -> str:
    return f"{CORPUS_HEADER} seed={seed} profile={CorpusProfile(profile).value} count={count}"


def write_corpus(path: Union[str, Path], frames: List[Frame], seed: int,
                 profile: Union[CorpusProfile, str]) -> None:
    """Write a corpus file: manifest line, then one hex frame per line."""
    lines = [corpus_header(seed, profile, len(frames))]
    lines += [frame_to_hex(frame) for frame in frames]
    Path(path).write_text("\n".join(lines) + "\n")


def read_corpus(path: Union[str, Path]) -> Tuple[Dict[str, str], List[Frame]]:
    """Read a corpus or plain hex file; damaged frames are loaded as-is."""
    manifest: Dict[str, str] = {}
    frames = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(CORPUS_HEADER):
                manifest.update(part.split("=", 1) for part in line.split()[2:] if "=" in part)
            continue
        frames.append(frame_from_hex(line, strict=False))
    return manifest, frames
