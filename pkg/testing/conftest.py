"""Shared fixtures for the SARLINK test suite."""

import os
import sys

import numpy as np
import pytest

# Add the project root to the Python path for package imports
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from sarlink.codec.beacon import (  # noqa: E402
    BeaconProtocol, BeaconSpec, Icao24, MmsiTail, NationalId, Position, SerialId,
)
from sarlink.config.settings import SarlinkSettings  # noqa: E402
from sarlink.frame.bitframe import FrameFormat  # noqa: E402
from sarlink.radio.modem import ModemConfig  # noqa: E402

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-sized runs, selected with -m slow")


def pytest_collection_modifyitems(config, items):
    if "slow" in (config.getoption("-m") or ""):
        return
    skip_slow = pytest.mark.skip(reason="acceptance-sized run; use -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(406)


@pytest.fixture
def settings(monkeypatch):
    for name in ("SARLINK_SEED", "SARLINK_SAMPLE_RATE", "SARLINK_SYNC_MISMATCHES",
                 "SARLINK_DEBUG", "SARLINK_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    return SarlinkSettings()


@pytest.fixture
def fast_modem():
    """8 kHz modem: 20 samples per bit keeps loopback tests quick."""
    return ModemConfig(sample_rate=8000)


@pytest.fixture
def mmsi_spec():
    return BeaconSpec(
        protocol=BeaconProtocol.STD_LOC_EPIRB_MMSI,
        country=230,
        identity=MmsiTail(123456, 1),
        position=Position(60.1699, 24.9384),
        position_source_internal=True,
    )


@pytest.fixture
def national_plb_spec():
    return BeaconSpec(
        protocol=BeaconProtocol.NAT_LOC_PLB,
        country=366,
        identity=NationalId(98765),
        position=Position(-33.8688, 151.2093),
        homing=True,
        additional_data=True,
    )


@pytest.fixture
def short_serial_spec():
    return BeaconSpec(
        protocol=BeaconProtocol.STD_LOC_ELT_SERIAL,
        country=338,
        identity=SerialId(4242, 3),
        format=FrameFormat.SHORT,
    )


@pytest.fixture
def icao_spec():
    return BeaconSpec(
        protocol=BeaconProtocol.STD_LOC_ELT_ICAO24,
        country=232,
        identity=Icao24(0x4CA2B1),
        position=Position(51.4700, -0.4543),
    )
