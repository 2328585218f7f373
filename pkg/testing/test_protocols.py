"""Tests for beacon encoding, decoding and position quantization."""

import dataclasses

import numpy as np
import pytest

from sarlink.codec.bch import CheckStatus
from sarlink.codec.beacon import (
    SUPPORTED_PROTOCOLS, BeaconProtocol, BeaconSpec, BeaconSpecError, CountryError, Icao24,
    MmsiTail, NationalId, Position, PositionError, SerialId,
)
from sarlink.codec.mid_table import MidTable, country_name
from sarlink.codec.positions import (
    COARSE_BOUND, COARSE_NO_FIX, OFFSET_BOUND, OFFSET_NONE, EncodedPosition, PositionScheme,
    decode_position, encode_position,
)
from sarlink.codec.protocols import STD_POSITION, decode_frame, encode_beacon, refresh_parity
from sarlink.frame.bitframe import (
    PROTOCOL_CODE, PROTOCOL_FLAG, FrameFormat, FrameMode, field_access, hex_id_of,
)
from sarlink.fuzz.corpus import random_spec

EPS = 1e-9


def _assert_roundtrip(spec: BeaconSpec):
    report = decode_frame(encode_beacon(spec))
    assert report.clean
    decoded = report.to_spec()
    assert dataclasses.replace(decoded, position=None) == dataclasses.replace(spec, position=None)
    if spec.position is None:
        assert decoded.position is None
        return
    bound = OFFSET_BOUND if spec.format is FrameFormat.LONG else COARSE_BOUND[PositionScheme.STANDARD]
    assert abs(decoded.position.latitude - spec.position.latitude) <= bound + EPS
    assert abs(decoded.position.longitude - spec.position.longitude) <= bound + EPS


@pytest.mark.parametrize("protocol, code", [
    (BeaconProtocol.NAT_LOC_ELT, "1000"),
    (BeaconProtocol.NAT_LOC_EPIRB, "1010"),
    (BeaconProtocol.NAT_LOC_PLB, "1011"),
])
def test_national_protocol_codes_in_bits_37_to_40(protocol, code):
    spec = BeaconSpec(protocol=protocol, country=366, identity=NationalId(1))
    frame = encode_beacon(spec)
    assert "".join(str(b) for b in frame.bits[36:40]) == code


def test_protocol_code_table():
    assert BeaconProtocol.STD_LOC_EPIRB_MMSI.code == 0b0010
    assert BeaconProtocol.from_code(0b0011) is BeaconProtocol.STD_LOC_ELT_ICAO24
    assert BeaconProtocol.from_code(0b1111) is BeaconProtocol.UNKNOWN
    assert len(SUPPORTED_PROTOCOLS) == 8


def test_fixture_specs_roundtrip(mmsi_spec, national_plb_spec, short_serial_spec, icao_spec):
    for spec in (mmsi_spec, national_plb_spec, short_serial_spec, icao_spec):
        _assert_roundtrip(spec)


def test_self_test_mode_roundtrip(mmsi_spec):
    spec = dataclasses.replace(mmsi_spec, mode=FrameMode.SELF_TEST)
    report = decode_frame(encode_beacon(spec))
    assert report.mode is FrameMode.SELF_TEST
    assert report.to_spec().mode is FrameMode.SELF_TEST


def test_decoded_report_fields(mmsi_spec):
    frame = encode_beacon(mmsi_spec)
    report = decode_frame(frame)
    assert report.protocol is BeaconProtocol.STD_LOC_EPIRB_MMSI
    assert report.protocol_code == 0b0010
    assert report.country == 230
    assert report.country_name == "Finland"
    assert report.identity == MmsiTail(123456, 1)
    assert report.position_source_internal
    assert report.hex_id == hex_id_of(frame)
    assert len(report.hex_id) == 15
    assert report.bch1.status is CheckStatus.CLEAN
    assert report.bch2.status is CheckStatus.CLEAN
    assert report.notes == []


def test_short_frame_has_no_pdf2(short_serial_spec):
    report = decode_frame(encode_beacon(short_serial_spec))
    assert report.format is FrameFormat.SHORT
    assert report.bch2 is None
    assert report.decoded_position is None
    assert report.identity == SerialId(4242, 3)


def test_long_frame_without_position_decodes_none():
    spec = BeaconSpec(protocol=BeaconProtocol.STD_LOC_PLB_SERIAL, country=201, identity=SerialId(7))
    frame = encode_beacon(spec)
    assert field_access(frame, STD_POSITION) == COARSE_NO_FIX[PositionScheme.STANDARD]
    assert decode_frame(frame).decoded_position is None


def test_random_specs_roundtrip(rng):
    for protocol in SUPPORTED_PROTOCOLS:
        for _ in range(40):
            _assert_roundtrip(random_spec(rng, protocol))


@pytest.mark.slow
def test_codec_roundtrip_full_size():
    rng = np.random.default_rng(4)
    for index in range(10_000):
        _assert_roundtrip(random_spec(rng, SUPPORTED_PROTOCOLS[index % len(SUPPORTED_PROTOCOLS)]))


def test_single_bit_error_is_corrected(mmsi_spec):
    frame = encode_beacon(mmsi_spec)
    damaged = frame.copy()
    damaged.bits[49] ^= 1
    report = decode_frame(damaged)
    assert report.bch1.status is CheckStatus.CORRECTED
    assert report.bch1.error_positions == [50 - 24]
    assert report.raw_frame == frame
    assert report.received_frame == damaged
    assert report.identity == mmsi_spec.identity


@pytest.mark.parametrize("seed", range(5))
def test_two_pdf1_flips_decode_like_the_clean_frame(seed):
    rng = np.random.default_rng(seed)
    frame = encode_beacon(random_spec(rng, frame_format=FrameFormat.LONG))
    clean = decode_frame(frame)
    damaged = frame.copy()
    flipped = sorted(int(bit) for bit in rng.choice(np.arange(25, 86), 2, replace=False))
    damaged.bits[np.array(flipped) - 1] ^= 1

    report = decode_frame(damaged)
    assert report.bch1.status is CheckStatus.CORRECTED
    assert sorted(report.bch1.error_positions) == [bit - 24 for bit in flipped]
    assert report.bch2.status is CheckStatus.CLEAN
    assert report.raw_frame == frame
    for name in ("protocol", "country", "identity", "homing", "position_source_internal",
                 "additional_data", "mode", "format", "hex_id", "decoded_position", "raw_fields"):
        assert getattr(report, name) == getattr(clean, name), name


def test_stale_parity_is_reported_not_raised(mmsi_spec):
    frame = encode_beacon(mmsi_spec)
    frame.bits[40:50] ^= 1
    report = decode_frame(frame)
    assert report.bch1.status is not CheckStatus.CLEAN
    assert not report.clean


def test_unknown_protocol_code_is_flagged():
    spec = BeaconSpec(protocol=BeaconProtocol.STD_LOC_ELT_SERIAL, country=1, identity=SerialId(1))
    frame = encode_beacon(spec)
    field_access(frame, PROTOCOL_CODE, 0b1111)
    refresh_parity(frame)
    report = decode_frame(frame)
    assert report.protocol is BeaconProtocol.UNKNOWN
    assert report.identity is None
    assert any("unsupported protocol code 1111" in note for note in report.notes)


def test_user_protocol_flag_is_unknown():
    spec = BeaconSpec(protocol=BeaconProtocol.STD_LOC_ELT_SERIAL, country=1, identity=SerialId(1))
    frame = encode_beacon(spec)
    field_access(frame, PROTOCOL_FLAG, 1)
    refresh_parity(frame)
    report = decode_frame(frame)
    assert report.protocol is BeaconProtocol.UNKNOWN
    assert report.notes == ["protocol flag set (user protocol)"]


def test_hostile_position_field_decodes_without_fix():
    spec = BeaconSpec(protocol=BeaconProtocol.STD_LOC_ELT_SERIAL, country=1, identity=SerialId(1),
                      position=Position(10.0, 10.0))
    frame = encode_beacon(spec)
    field_access(frame, STD_POSITION, 400 << 11)  # 100 degrees north
    refresh_parity(frame)
    report = decode_frame(frame)
    assert report.decoded_position is None
    assert any(note.startswith("position out of range") for note in report.notes)


def test_report_of_unknown_protocol_cannot_become_a_spec():
    report = decode_frame(encode_beacon(random_spec(np.random.default_rng(0))))
    report.protocol = BeaconProtocol.UNKNOWN
    with pytest.raises(BeaconSpecError):
        report.to_spec()


@pytest.mark.parametrize("changes, error", [
    ({"country": 1024}, CountryError),
    ({"identity": Icao24(1)}, BeaconSpecError),
    ({"format": FrameFormat.SHORT}, BeaconSpecError),
    ({"additional_data": True}, BeaconSpecError),
    ({"protocol": BeaconProtocol.UNKNOWN}, BeaconSpecError),
    ({"mode": "sleep"}, BeaconSpecError),
])
def test_spec_invariants(mmsi_spec, changes, error):
    with pytest.raises(error):
        encode_beacon(dataclasses.replace(mmsi_spec, **changes))


def test_national_spec_rejects_position_source_flag(national_plb_spec):
    with pytest.raises(BeaconSpecError):
        dataclasses.replace(national_plb_spec, position_source_internal=True).validate()


def test_identity_ranges():
    with pytest.raises(BeaconSpecError):
        MmsiTail(1000000)
    with pytest.raises(BeaconSpecError):
        NationalId(1 << 18)
    with pytest.raises(BeaconSpecError):
        SerialId(-1)
    assert MmsiTail.from_value(MmsiTail(999999, 15).value) == MmsiTail(999999, 15)


def test_position_ranges():
    with pytest.raises(PositionError):
        Position(90.5, 0.0)
    with pytest.raises(PositionError):
        Position(0.0, float("nan"))


class TestPositions:
    """Quantization details of both position layouts."""

    def test_no_fix_sentinels(self):
        for scheme in PositionScheme:
            encoded = encode_position(None, scheme)
            assert encoded.coarse == COARSE_NO_FIX[scheme]
            assert encoded.offset == OFFSET_NONE[scheme]
            assert not encoded.has_fix
            assert decode_position(encoded) is None

    def test_standard_coarse_rounds_half_toward_zero(self):
        encoded = encode_position(Position(0.125, -0.375), PositionScheme.STANDARD)
        coarse_only = decode_position(encoded, use_offset=False)
        assert coarse_only == Position(0.0, -0.25)

    def test_standard_offsets_refine_to_two_arcsec(self):
        position = Position(60.1699, 24.9384)
        encoded = encode_position(position, PositionScheme.STANDARD)
        coarse = decode_position(encoded, use_offset=False)
        fine = decode_position(encoded)
        assert abs(coarse.latitude - position.latitude) <= COARSE_BOUND[PositionScheme.STANDARD]
        assert abs(fine.latitude - position.latitude) <= OFFSET_BOUND + EPS
        assert abs(fine.longitude - position.longitude) <= OFFSET_BOUND + EPS

    def test_national_coarse_within_one_arcmin(self):
        position = Position(-33.8688, 151.2093)
        coarse = decode_position(encode_position(position, PositionScheme.NATIONAL), use_offset=False)
        assert abs(coarse.latitude - position.latitude) <= COARSE_BOUND[PositionScheme.NATIONAL] + EPS
        assert abs(coarse.longitude - position.longitude) <= COARSE_BOUND[PositionScheme.NATIONAL] + EPS

    def test_national_reserved_offset_bits_stay_zero(self):
        encoded = encode_position(Position(12.3456, -65.4321), PositionScheme.NATIONAL)
        for axis in (encoded.offset >> 10, encoded.offset & 0x3FF):
            assert axis & 0xF == 0

    @pytest.mark.parametrize("position", [
        Position(90.0, 180.0), Position(-90.0, -180.0), Position(0.0, 0.0), Position(-0.0001, 179.9999),
    ])
    def test_extreme_positions(self, position):
        for scheme in PositionScheme:
            decoded = decode_position(encode_position(position, scheme))
            assert abs(decoded.latitude - position.latitude) <= OFFSET_BOUND + EPS
            assert abs(decoded.longitude - position.longitude) <= OFFSET_BOUND + EPS

    def test_sentinel_offsets_decode_coarse_only(self):
        encoded = encode_position(Position(45.3, 7.7), PositionScheme.STANDARD)
        sentinel = EncodedPosition(PositionScheme.STANDARD, encoded.coarse, OFFSET_NONE[PositionScheme.STANDARD])
        assert decode_position(sentinel) == decode_position(encoded, use_offset=False)

    def test_out_of_range_fields_raise(self):
        with pytest.raises(PositionError):
            decode_position(EncodedPosition(PositionScheme.STANDARD, 400 << 11, 0))
        with pytest.raises(PositionError):
            decode_position(EncodedPosition(PositionScheme.NATIONAL, 31 << 14, 0))


class TestMidTable:
    def test_bundled_table(self):
        assert country_name(230) == "Finland"
        assert country_name(0) is None

    def test_lookup_range(self):
        with pytest.raises(CountryError):
            country_name(1024)

    def test_custom_table(self, tmp_path):
        path = tmp_path / "mids.csv"
        path.write_text("mid,name\n999, Testland \n")
        table = MidTable(path)
        assert len(table) == 1
        assert table.lookup(999) == "Testland"

    def test_custom_table_range_checked(self, tmp_path):
        path = tmp_path / "mids.csv"
        path.write_text("mid,name\n2000,Nowhere\n")
        with pytest.raises(CountryError):
            MidTable(path)
