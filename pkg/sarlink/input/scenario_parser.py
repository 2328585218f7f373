"""Scenario files describing channel plans."""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

from ..iqformat import IqFormatFactory
from ..radio.channel import ChannelError, ChannelEvent, ChannelPlan

_EVENT = re.compile(r"^(?P<path>.+?)\s*@\s*(?P<start>\S+)(?:\s+gain\s+(?P<gain>\S+))?$")


@dataclass
class ScenarioEvent:
    """An event line as written in a scenario file."""

    path: str
    start_s: float
    gain_db: float = 0.0

    def to_line(self) -> str:
        line = f"event = {self.path} @ {self.start_s:.6f}"
        return line + (f" gain {self.gain_db:g}" if self.gain_db else "")


@dataclass
class Scenario:
    seed: int
    events: List[ScenarioEvent]
    snr_db: Optional[float] = None
    freq_offset_hz: Optional[float] = None

    def to_text(self) -> str:
        lines = [f"seed = {self.seed}"]
        if self.snr_db is not None:
            lines.append(f"snr_db = {self.snr_db:g}")
        if self.freq_offset_hz is not None:
            lines.append(f"freq_offset_hz = {self.freq_offset_hz:g}")
        lines += [event.to_line() for event in self.events]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_plan(cls, plan: ChannelPlan, paths: Sequence[str]) -> "Scenario":
        """Describe a channel plan whose event I/Q is stored at ``paths``."""
        if len(paths) != len(plan.events):
            raise ChannelError(f"{len(paths)} path(s) for {len(plan.events)} event(s)")
        events = [ScenarioEvent(path, event.start_s, event.gain_db) for path, event in zip(paths, plan.events)]
        return cls(plan.seed, events, plan.snr_db, plan.freq_offset_hz)


class ScenarioParser:
    """Reads ``key = value`` scenario files into channel plans."""

    def __init__(self, default_seed: int = 0, iq_factory: Optional[IqFormatFactory] = None):
        self.default_seed = default_seed
        self.iq_factory = iq_factory or IqFormatFactory()
        self.logger = logging.getLogger(__name__)

    def parse_text(self, text: str) -> Scenario:
        seed, snr_db, offset = self.default_seed, None, None
        events = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition('='))
            try:
                if not sep:
                    raise ValueError("expected 'key = value'")
                if key == 'seed':
                    seed = int(value)
                elif key == 'snr_db':
                    snr_db = float(value)
                elif key == 'freq_offset_hz':
                    offset = float(value)
                elif key == 'event':
                    match = _EVENT.match(value)
                    if not match:
                        raise ValueError("expected '<path> @ <start_s> [gain <dB>]'")
                    events.append(ScenarioEvent(match['path'], float(match['start']),
                                                float(match['gain'] or 0.0)))
                else:
                    raise ValueError(f"unknown key {key!r}")
            except ValueError as e:
                raise ChannelError(f"scenario line {number}: {e}") from e
        return Scenario(seed, events, snr_db, offset)

    def load(self, path: Union[str, Path], sample_rate: Optional[float] = None) -> ChannelPlan:
        """Parse a scenario file and read the I/Q of every event.

        Relative event paths are resolved against the scenario's directory;
        each distinct file is read once.
        """
        path = Path(path)
        scenario = self.parse_text(path.read_text())
        cache = {}
        events = []
        for event in scenario.events:
            iq_path = Path(event.path)
            if not iq_path.is_absolute():
                iq_path = path.parent / iq_path
            if iq_path not in cache:
                cache[iq_path] = self.iq_factory.from_path(iq_path).read(iq_path, sample_rate)
            events.append(ChannelEvent(cache[iq_path], event.start_s, event.gain_db))

        self.logger.info(f"Scenario {path.name}: {len(events)} event(s) from {len(cache)} file(s)")
        return ChannelPlan(seed=scenario.seed, events=events, snr_db=scenario.snr_db,
                           freq_offset_hz=scenario.freq_offset_hz)
