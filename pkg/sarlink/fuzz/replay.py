"""Replay scheduling and spoof generation."""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Union

import numpy as np

from ..codec.beacon import BeaconSpec, BeaconSpecError
from ..codec.protocols import encode_beacon
from ..frame.bitframe import Frame
from ..radio.channel import ChannelEvent, ChannelPlan
from ..radio.modem import IqBuffer, ModemConfig, modulate_burst
from .mutator import FuzzPlanError

logger = logging.getLogger(__name__)

NOMINAL_REPETITION_S = 52.0


class ReplayError(FuzzPlanError):
    """A replay schedule cannot be realized."""


@dataclass
class ReplaySchedule:
    """Repeated retransmission of one captured or synthesized burst."""

    burst: Union[IqBuffer, Frame]
    repetitions: int
    interval_s: float = NOMINAL_REPETITION_S
    jitter_s: float = 0.0
    modem_config: ModemConfig = field(default_factory=ModemConfig)

    def burst_iq(self) -> IqBuffer:
        """The I/Q to replay; a frame is modulated once."""
        if isinstance(self.burst, IqBuffer):
            return self.burst
        return modulate_burst(self.burst, self.modem_config)

    def validate(self, iq: IqBuffer) -> None:
        if self.repetitions < 1:
            raise ReplayError(f"repetitions must be at least 1, got {self.repetitions}")
        if self.jitter_s < 0:
            raise ReplayError(f"jitter must be non-negative, got {self.jitter_s}")
        if self.interval_s <= iq.duration_s:
            raise ReplayError(
                f"interval {self.interval_s} s is not longer than the {iq.duration_s:.3f} s burst")


def replay_schedule(schedule: ReplaySchedule, seed: int) -> ChannelPlan:
    """Place ``repetitions`` copies of the identical I/Q at interval +/- jitter.

    The first copy starts at 0 s; jitter applies to the later ones.
    """
    iq = schedule.burst_iq()
    schedule.validate(iq)
    rng = np.random.default_rng(seed)

    events = []
    for index in range(schedule.repetitions):
        start = index * schedule.interval_s
        if index > 0 and schedule.jitter_s > 0:
            start += float(rng.uniform(-schedule.jitter_s, schedule.jitter_s))
        events.append(ChannelEvent(iq=iq, start_s=max(0.0, start)))

    logger.debug(f"replay: {schedule.repetitions} x {iq.duration_s:.3f} s burst every {schedule.interval_s} s")
    return ChannelPlan(seed=seed, events=events)


@dataclass
class SpoofTemplate:
    """A base beacon spec plus field overrides."""

    base: BeaconSpec
    overrides: Dict[str, Any] = field(default_factory=dict)

    def merged(self) -> BeaconSpec:
        """Apply the overrides; the result must still be a valid BeaconSpec."""
        known = {f.name for f in dataclasses.fields(BeaconSpec)}
        unknown = set(self.overrides) - known
        if unknown:
            raise FuzzPlanError(f"unknown override field(s): {sorted(unknown)}")
        spec = dataclasses.replace(self.base, **self.overrides)
        try:
            spec.validate()
        except BeaconSpecError as e:
            raise FuzzPlanError(f"merged spec is invalid: {e}") from e
        return spec


def spoof(template: SpoofTemplate) -> Frame:
    """Encode a valid-looking frame from a spoof template."""
    return encode_beacon(template.merged())
