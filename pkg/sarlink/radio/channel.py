"""Seeded channel impairments: noise, frequency offset, burst scheduling.

Noise is drawn from ``numpy.random.default_rng(seed)`` (PCG64 seeded through
SeedSequence), so a given seed maps to the same noise stream on every run.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .modem import IqBuffer

logger = logging.getLogger(__name__)


class ChannelError(ValueError):
    """Invalid impairment parameters or channel plan."""


@dataclass
class ChannelEvent:
    """One burst placed in a channel plan."""

    iq: IqBuffer
    start_s: float
    gain_db: float = 0.0


@dataclass
class ChannelPlan:
    """Bursts to mix into one buffer plus optional impairments."""

    seed: int
    events: List[ChannelEvent] = field(default_factory=list)
    snr_db: Optional[float] = None
    freq_offset_hz: Optional[float] = None

    def validate(self) -> None:
        if not self.events:
            raise ChannelError("channel plan has no events")
        rate = self.events[0].iq.sample_rate
        for event in self.events:
            if event.start_s < 0:
                raise ChannelError(f"event start {event.start_s} s is negative")
            if event.iq.sample_rate != rate:
                raise ChannelError(
                    f"mixed sample rates in plan: {rate} Hz and {event.iq.sample_rate} Hz")
        if self.snr_db is not None and not np.isfinite(self.snr_db):
            raise ChannelError(f"snr_db must be finite, got {self.snr_db}")

    @property
    def sample_rate(self) -> float:
        return self.events[0].iq.sample_rate


def signal_power(samples: np.ndarray) -> float:
    """Mean power over the samples that carry signal (nonzero magnitude)."""
    active = samples[np.abs(samples) > 0]
    return float(np.mean(np.abs(active) ** 2)) if active.size else 0.0


def awgn(iq: IqBuffer, snr_db: float, seed: int) -> IqBuffer:
    """Add complex white Gaussian noise at ``snr_db`` relative to the signal power.

    The reference power excludes silent padding; an all-silent buffer is
    referenced to unit power.
    """
    if not np.isfinite(snr_db):
        raise ChannelError(f"snr_db must be finite, got {snr_db}")
    reference = signal_power(iq.samples) or 1.0
    noise_power = reference * 10 ** (-snr_db / 10)

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(iq)) + 1j * rng.standard_normal(len(iq))
    return IqBuffer(iq.samples + np.sqrt(noise_power / 2) * noise, iq.sample_rate)


def freq_shift(iq: IqBuffer, hz: float) -> IqBuffer:
    """Rotate the buffer by a complex exponential of ``hz``."""
    if not abs(hz) < iq.sample_rate / 2:
        raise ChannelError(f"shift of {hz} Hz aliases at {iq.sample_rate} Hz")
    if hz == 0:
        return IqBuffer(iq.samples.copy(), iq.sample_rate)
    n = np.arange(len(iq))
    return IqBuffer(iq.samples * np.exp(2j * np.pi * hz * n / iq.sample_rate), iq.sample_rate)


def schedule_mix(plan: ChannelPlan) -> IqBuffer:
    """Sum delayed, gain-scaled bursts, then apply offset and noise."""
    plan.validate()
    fs = plan.sample_rate
    starts = [int(round(event.start_s * fs)) for event in plan.events]
    length = max(start + len(event.iq) for start, event in zip(starts, plan.events))

    mixed = np.zeros(length, dtype=np.complex128)
    for start, event in zip(starts, plan.events):
        mixed[start:start + len(event.iq)] += event.iq.samples * 10 ** (event.gain_db / 20)
    out = IqBuffer(mixed, fs)

    if plan.freq_offset_hz:
        out = freq_shift(out, plan.freq_offset_hz)
    if plan.snr_db is not None:
        out = awgn(out, plan.snr_db, plan.seed)

    logger.debug(f"mixed {len(plan.events)} event(s) into {out.duration_s:.2f} s")
    return out
