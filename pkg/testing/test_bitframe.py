"""Tests for the bit-exact frame container."""

import numpy as np
import pytest

from sarlink.frame.bitframe import (
    BCH2_PARITY, COUNTRY, FORMAT_FLAG, HEX_ID, PROTOCOL_CODE, BadLength, FieldWindow, Frame,
    FrameError, FrameFormat, FrameInvariantError, FrameMode, NonHexCharacter, SyncViolation,
    ValueOverflow, WindowOutOfRange, field_access, find_sync, frame_from_hex, frame_to_hex,
    hex_id_of,
)

LONG_BLANK_HEX = "FFFE2F8" + "0" * 29
SHORT_BLANK_HEX = "FFFE2F" + "0" * 22
SELF_TEST_BLANK_HEX = "FFFED08" + "0" * 29


def test_blank_frames_serialize_to_known_hex():
    assert frame_to_hex(Frame.blank(FrameFormat.LONG)) == LONG_BLANK_HEX
    assert frame_to_hex(Frame.blank(FrameFormat.SHORT)) == SHORT_BLANK_HEX
    assert frame_to_hex(Frame.blank(FrameFormat.LONG, FrameMode.SELF_TEST)) == SELF_TEST_BLANK_HEX


def test_blank_frame_properties():
    frame = Frame.blank(FrameFormat.SHORT, FrameMode.SELF_TEST)
    assert len(frame) == 112
    assert frame.format is FrameFormat.SHORT
    assert frame.mode is FrameMode.SELF_TEST
    assert frame.bit(FORMAT_FLAG.first_bit) == 0
    assert frame.is_well_formed()


def test_constructor_rejects_bad_lengths_and_values():
    with pytest.raises(BadLength):
        Frame(np.zeros(100, dtype=np.uint8))
    bits = np.zeros(144, dtype=np.uint8)
    bits[3] = 2
    with pytest.raises(FrameError):
        Frame(bits)


def test_field_access_writes_and_reads_back():
    frame = Frame.blank()
    assert field_access(frame, COUNTRY, 230) == 230
    assert field_access(frame, COUNTRY) == 230
    assert field_access(frame, PROTOCOL_CODE, 0b1011) == 0b1011
    assert list(frame.bits[36:40]) == [1, 0, 1, 1]


def test_field_access_rejects_overflow_and_out_of_range_windows():
    frame = Frame.blank()
    with pytest.raises(ValueOverflow):
        field_access(frame, COUNTRY, 1024)
    with pytest.raises(ValueOverflow):
        field_access(frame, COUNTRY, -1)
    with pytest.raises(WindowOutOfRange):
        field_access(Frame.blank(FrameFormat.SHORT), BCH2_PARITY)


def test_window_must_lie_inside_a_long_frame():
    with pytest.raises(WindowOutOfRange):
        FieldWindow("bad", 0, 4)
    with pytest.raises(WindowOutOfRange):
        FieldWindow("bad", 140, 145)
    assert FieldWindow("ok", 10, 13).width == 4


def test_hex_id_covers_bits_26_to_85():
    frame = Frame.blank()
    field_access(frame, HEX_ID, (1 << 60) - 1)
    assert hex_id_of(frame) == "F" * 15
    field_access(frame, HEX_ID, 0)
    assert hex_id_of(frame) == "0" * 15


def test_hex_roundtrip_preserves_bits(rng):
    frame = Frame.blank()
    frame.bits[25:] = rng.integers(0, 2, 144 - 25)
    assert frame_from_hex(frame_to_hex(frame)) == frame


def test_frame_from_hex_errors():
    with pytest.raises(BadLength):
        frame_from_hex("FFFE2F")
    with pytest.raises(NonHexCharacter):
        frame_from_hex("FFFE2F" + "G" + "0" * 21)
    with pytest.raises(SyncViolation):
        frame_from_hex("0" * 36)


def test_frame_from_hex_accepts_whitespace_and_lowercase():
    spaced = " ".join(LONG_BLANK_HEX[i:i + 4] for i in range(0, 36, 4)).lower()
    assert frame_to_hex(frame_from_hex(spaced)) == LONG_BLANK_HEX


def test_non_strict_parse_keeps_damaged_frames():
    frame = frame_from_hex("0" * 36, strict=False)
    assert frame.mode is None
    assert not frame.is_well_formed()


def test_format_flag_must_match_length():
    frame = Frame.blank(FrameFormat.LONG)
    frame.bits[FORMAT_FLAG.first_bit - 1] = 0
    with pytest.raises(FrameInvariantError):
        frame.validate()
    assert not frame.is_well_formed()


def test_find_sync_locates_both_modes():
    normal = Frame.blank().bits[:24]
    self_test = Frame.blank(mode=FrameMode.SELF_TEST).bits[:24]
    stream = np.concatenate([np.zeros(5, dtype=np.uint8), normal, np.zeros(10, dtype=np.uint8), self_test])

    hits = find_sync(stream)
    assert [(hit.offset, hit.mode) for hit in hits] == [(5, FrameMode.NORMAL), (39, FrameMode.SELF_TEST)]
    assert all(hit.mismatches == 0 for hit in hits)


def test_find_sync_tolerates_configured_mismatches():
    stream = np.concatenate([np.zeros(3, dtype=np.uint8), Frame.blank().bits[:24]])
    stream[3 + 20] ^= 1
    assert find_sync(stream) == []

    hits = find_sync(stream, max_mismatches=1)
    assert len(hits) == 1
    assert hits[0].offset == 3
    assert hits[0].mode is FrameMode.NORMAL
    assert hits[0].mismatches == 1


def test_find_sync_on_short_streams():
    assert find_sync([1] * 10) == []
    assert find_sync(np.zeros(200, dtype=np.uint8)) == []


def _random_long_frame(rng) -> Frame:
    frame = Frame.blank()
    frame.bits[25:] = rng.integers(0, 2, 144 - 25)
    return frame


@pytest.mark.parametrize("seed", range(5))
def test_field_access_leaves_bits_outside_the_window_alone(seed):
    rng = np.random.default_rng(seed)
    for _ in range(200):
        frame = _random_long_frame(rng)
        first = int(rng.integers(1, 145))
        last = int(rng.integers(first, 145))
        window = FieldWindow("random", first, last)
        value = int("".join(str(bit) for bit in rng.integers(0, 2, window.width)), 2)
        before = frame.bits.copy()

        assert field_access(frame, window, value) == value
        outside = np.ones(144, dtype=bool)
        outside[first - 1:last] = False
        assert np.array_equal(frame.bits[outside], before[outside])


def test_writing_neighbour_fields_keeps_bits_36_and_41():
    frame = Frame.blank()
    frame.bits[35] = 1
    frame.bits[40] = 1
    field_access(frame, COUNTRY, 0)
    assert frame.bits[35] == 0
    field_access(frame, PROTOCOL_CODE, 0)
    assert frame.bits[40] == 1
    frame.bits[35] = 1
    field_access(frame, PROTOCOL_CODE, 0b1111)
    assert (frame.bits[35], frame.bits[40]) == (1, 1)


@pytest.mark.parametrize("seed", range(5))
def test_hex_id_agrees_with_the_hex_id_window(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        frame = _random_long_frame(rng)
        assert hex_id_of(frame) == f"{field_access(frame, HEX_ID):015X}"


def _pattern_offsets(stream: np.ndarray):
    text = "".join(str(bit) for bit in stream)
    offsets = []
    for sync in ("000101111", "011010000"):
        pattern = "1" * 15 + sync
        start = text.find(pattern)
        while start != -1:
            offsets.append(start)
            start = text.find(pattern, start + 1)
    return sorted(offsets)


@pytest.mark.parametrize("seed", range(10))
def test_find_sync_inside_random_noise(seed):
    rng = np.random.default_rng(seed)
    frame = _random_long_frame(rng)
    while True:
        lead = rng.integers(0, 2, int(rng.integers(0, 400)), dtype=np.uint8)
        tail = rng.integers(0, 2, int(rng.integers(0, 400)), dtype=np.uint8)
        stream = np.concatenate([lead, frame.bits, tail])
        if _pattern_offsets(stream) == [lead.size]:
            break

    hits = find_sync(stream)
    assert [(hit.offset, hit.mode) for hit in hits] == [(lead.size, FrameMode.NORMAL)]
