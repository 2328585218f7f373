"""Bit-exact container for 406 MHz beacon frames.

Bit positions are 1-indexed everywhere in this module, matching the beacon
message layout: bit 1 is the first transmitted bit and the MSB of the first
hex digit of the serialized frame.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

SHORT_LENGTH = 112
LONG_LENGTH = 144
FRAME_LENGTHS = (SHORT_LENGTH, LONG_LENGTH)

BIT_SYNC = (1,) * 15
FRAME_SYNC_NORMAL = (0, 0, 0, 1, 0, 1, 1, 1, 1)
FRAME_SYNC_SELF_TEST = (0, 1, 1, 0, 1, 0, 0, 0, 0)
PREAMBLE_LENGTH = len(BIT_SYNC) + len(FRAME_SYNC_NORMAL)

_HEX_DIGITS = np.array(list("0123456789ABCDEF"))
_NIBBLE_WEIGHTS = np.array([8, 4, 2, 1], dtype=np.int64)

# Arbitrary-length bit sequence: demodulator output or file input.
BitStream = np.ndarray


class FrameError(ValueError):
    """Base class for frame container errors."""


class WindowOutOfRange(FrameError):
    """A field window does not fit the frame."""


class ValueOverflow(FrameError):
    """A value does not fit the width of a field window."""


class BadLength(FrameError):
    """A frame or serialized frame has an unsupported length."""


class NonHexCharacter(FrameError):
    """Serialized frame text contains a non-hex character."""


class FrameInvariantError(FrameError):
    """A frame violates a structural invariant."""


class SyncViolation(FrameInvariantError):
    """Bit sync or frame sync pattern is damaged."""


class FrameFormat(str, Enum):
    SHORT = "short"
    LONG = "long"


class FrameMode(str, Enum):
    NORMAL = "normal"
    SELF_TEST = "self_test"


SYNC_WORDS = {
    FrameMode.NORMAL: FRAME_SYNC_NORMAL,
    FrameMode.SELF_TEST: FRAME_SYNC_SELF_TEST,
}


@dataclass(frozen=True)
class FieldWindow:
    """Named, inclusive, 1-indexed bit range of a frame."""

    name: str
    first_bit: int
    last_bit: int

    def __post_init__(self):
        if not 1 <= self.first_bit <= self.last_bit <= LONG_LENGTH:
            raise WindowOutOfRange(
                f"window {self.name} [{self.first_bit}, {self.last_bit}] outside 1..{LONG_LENGTH}")

    @property
    def width(self) -> int:
        return self.last_bit - self.first_bit + 1

    def fits(self, length: int) -> bool:
        return self.last_bit <= length


# Common windows of the beacon message
BIT_SYNC_WINDOW = FieldWindow("bit_sync", 1, 15)
FRAME_SYNC_WINDOW = FieldWindow("frame_sync", 16, 24)
FORMAT_FLAG = FieldWindow("format_flag", 25, 25)
PROTOCOL_FLAG = FieldWindow("protocol_flag", 26, 26)
COUNTRY = FieldWindow("country", 27, 36)
PROTOCOL_CODE = FieldWindow("protocol_code", 37, 40)
PDF1 = FieldWindow("pdf1", 25, 85)
HEX_ID = FieldWindow("hex_id", 26, 85)
BCH1_PARITY = FieldWindow("bch1", 86, 106)
PDF2 = FieldWindow("pdf2", 107, 132)
BCH2_PARITY = FieldWindow("bch2", 133, 144)
NON_PROTECTED = FieldWindow("non_protected", 107, 112)


class Frame:
    """A 112- or 144-bit beacon message.

    The container holds raw bits; structural invariants are checked by
    ``validate()`` (and by ``frame_from_hex``), so that damaged frames can
    still be carried around for fuzzing and decoding.
    """

    __slots__ = ("bits",)

    def __init__(self, bits: Union[Iterable[int], np.ndarray]):
        array = np.array(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if array.ndim != 1 or array.size not in FRAME_LENGTHS:
            raise BadLength(f"frame must be {SHORT_LENGTH} or {LONG_LENGTH} bits, got {array.size}")
        if np.any(array > 1):
            raise FrameError("frame bits must be 0 or 1")
        self.bits = array

    @classmethod
    def blank(cls, frame_format: FrameFormat = FrameFormat.LONG,
              mode: FrameMode = FrameMode.NORMAL) -> 'Frame':
        """Create a frame holding only sync patterns and the format flag."""
        length = LONG_LENGTH if FrameFormat(frame_format) is FrameFormat.LONG else SHORT_LENGTH
        bits = np.zeros(length, dtype=np.uint8)
        bits[:PREAMBLE_LENGTH] = BIT_SYNC + SYNC_WORDS[FrameMode(mode)]
        bits[FORMAT_FLAG.first_bit - 1] = 1 if length == LONG_LENGTH else 0
        return cls(bits)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Frame({frame_to_hex(self)})"

    def copy(self) -> 'Frame':
        return Frame(self.bits.copy())

    def bit(self, position: int) -> int:
        """Return the bit at a 1-indexed position."""
        return int(self.bits[position - 1])

    @property
    def format(self) -> FrameFormat:
        return FrameFormat.LONG if len(self) == LONG_LENGTH else FrameFormat.SHORT

    @property
    def mode(self) -> Optional[FrameMode]:
        """Mode implied by the frame sync word, or None when it matches neither."""
        if tuple(self.bits[:len(BIT_SYNC)]) != BIT_SYNC:
            return None
        word = tuple(int(b) for b in self.bits[len(BIT_SYNC):PREAMBLE_LENGTH])
        for mode, sync_word in SYNC_WORDS.items():
            if word == sync_word:
                return mode
        return None

    def validate(self) -> None:
        """Raise unless bit sync, frame sync and format flag are consistent."""
        if tuple(int(b) for b in self.bits[:len(BIT_SYNC)]) != BIT_SYNC:
            raise SyncViolation("bits 1-15 must all be 1")
        if self.mode is None:
            raise SyncViolation("bits 16-24 hold neither the normal nor the self-test sync word")
        expected_flag = 1 if len(self) == LONG_LENGTH else 0
        if self.bit(FORMAT_FLAG.first_bit) != expected_flag:
            raise FrameInvariantError(
                f"format flag (bit 25) is {self.bit(FORMAT_FLAG.first_bit)} on a {len(self)}-bit frame")

    def is_well_formed(self) -> bool:
        try:
            self.validate()
        except FrameInvariantError:
            return False
        return True


def bits_to_int(bits: np.ndarray) -> int:
    """Big-endian unsigned integer of a bit array."""
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Big-endian bit array of ``width`` bits."""
    return np.array([(value >> shift) & 1 for shift in range(width - 1, -1, -1)], dtype=np.uint8)


def field_access(frame: Frame, window: FieldWindow, new_value: Optional[int] = None) -> int:
    """Read (and optionally first write) the unsigned value held in a window."""
    if not window.fits(len(frame)):
        raise WindowOutOfRange(f"window {window.name} ends at bit {window.last_bit}, frame has {len(frame)}")
    start, stop = window.first_bit - 1, window.last_bit
    if new_value is not None:
        if new_value < 0 or new_value >= (1 << window.width):
            raise ValueOverflow(f"value {new_value} does not fit {window.width}-bit window {window.name}")
        frame.bits[start:stop] = int_to_bits(new_value, window.width)
    return bits_to_int(frame.bits[start:stop])


def hex_id_of(frame: Frame) -> str:
    """15-hex-digit beacon identifier held in bits 26-85."""
    nibbles = frame.bits[HEX_ID.first_bit - 1:HEX_ID.last_bit].astype(np.int64).reshape(15, 4)
    return "".join(_HEX_DIGITS[nibbles @ _NIBBLE_WEIGHTS])


@dataclass(frozen=True)
class SyncHit:
    """Location of a bit-sync + frame-sync pattern in a bit stream (0-indexed)."""

    offset: int
    mode: FrameMode
    mismatches: int = 0


def find_sync(stream: Union[BitStream, List[int]], max_mismatches: int = 0) -> List[SyncHit]:
    """Find every offset where 15 ones followed by a frame sync word occur.

    With ``max_mismatches > 0`` a hit may differ from the 24-bit pattern in up
    to that many positions; the closer of the two sync words wins, ties go to
    normal mode.
    """
    bits = np.asarray(stream, dtype=np.uint8)
    if bits.size < PREAMBLE_LENGTH:
        return []

    windows = np.lib.stride_tricks.sliding_window_view(bits, PREAMBLE_LENGTH)
    normal = np.array(BIT_SYNC + FRAME_SYNC_NORMAL, dtype=np.uint8)
    self_test = np.array(BIT_SYNC + FRAME_SYNC_SELF_TEST, dtype=np.uint8)
    normal_errors = np.count_nonzero(windows != normal, axis=1)
    test_errors = np.count_nonzero(windows != self_test, axis=1)

    hits = []
    for offset in np.flatnonzero(np.minimum(normal_errors, test_errors) <= max_mismatches):
        if normal_errors[offset] <= test_errors[offset]:
            hits.append(SyncHit(int(offset), FrameMode.NORMAL, int(normal_errors[offset])))
        else:
            hits.append(SyncHit(int(offset), FrameMode.SELF_TEST, int(test_errors[offset])))
    return hits


def frame_to_hex(frame: Frame) -> str:
    """Uppercase hex serialization, 28 (short) or 36 (long) digits."""
    nibbles = frame.bits.astype(np.int64).reshape(-1, 4)
    return "".join(_HEX_DIGITS[nibbles @ _NIBBLE_WEIGHTS])


def frame_from_hex(text: str, strict: bool = True) -> Frame:
    """Parse a serialized frame.

    With ``strict`` (the default) the sync and format-flag invariants are
    enforced; corpus readers pass ``strict=False`` to load damaged frames.
    """
    digits = "".join(text.split()).upper()
    if len(digits) * 4 not in FRAME_LENGTHS:
        raise BadLength(f"expected 28 or 36 hex digits, got {len(digits)}")
    if digits.strip("0123456789ABCDEF"):
        raise NonHexCharacter(f"non-hex character in {text!r}")

    frame = Frame(int_to_bits(int(digits, 16), len(digits) * 4))
    if strict:
        frame.validate()
    return frame
