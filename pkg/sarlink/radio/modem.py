"""Baseband burst synthesis and demodulation.

A burst is ``preamble_s`` of unmodulated carrier followed by the frame bits,
biphase-L phase modulated at ``bit_rate``: a 1 holds +phase_dev for the first
half-bit and -phase_dev for the second, a 0 the inverse.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.ndimage import uniform_filter1d

from ..frame.bitframe import FORMAT_FLAG, LONG_LENGTH, SHORT_LENGTH, BitStream, Frame, FrameMode, find_sync

logger = logging.getLogger(__name__)

MIN_CFO_WINDOW_S = 0.020
POWER_WINDOW_S = 0.005
PREAMBLE_GUARD_S = 0.010
NOISE_FLOOR_PERCENTILE = 5
FLAT_ENVELOPE_CV = 0.35
SNR_CAP_DB = 200.0


class ModemError(ValueError):
    """Invalid modem configuration or input."""


class CfoError(ModemError):
    """Carrier-frequency offset cannot be estimated from the given samples."""


@dataclass
class IqBuffer:
    """Complex baseband samples at a known sample rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ModemError(f"samples must be one-dimensional, got shape {self.samples.shape}")
        if not self.sample_rate > 0:
            raise ModemError(f"sample_rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(self.samples)):
            raise ModemError("samples must be finite")

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate


@dataclass
class ModemConfig:
    """Modulation and receiver parameters."""

    sample_rate: int = 48000
    bit_rate: int = 400
    preamble_s: float = 0.160
    phase_dev: float = 1.1
    carrier_offset: float = 0.0
    amplitude: float = 1.0
    ramp_us: float = 0.0
    detect_threshold_db: float = 10.0
    hangover_s: float = 0.020
    max_sync_mismatches: int = 0

    def validate(self) -> None:
        if self.sample_rate <= 0 or self.bit_rate <= 0:
            raise ModemError("sample_rate and bit_rate must be positive")
        if self.sample_rate % self.bit_rate != 0:
            raise ModemError(
                f"sample_rate {self.sample_rate} is not a multiple of bit_rate {self.bit_rate}")
        if self.samples_per_bit < 2:
            raise ModemError("at least two samples per bit are required")
        if not 0.0 < self.phase_dev < math.pi / 2:
            raise ModemError(f"phase_dev must be in (0, pi/2), got {self.phase_dev}")
        if self.amplitude <= 0 or self.preamble_s < 0 or self.ramp_us < 0:
            raise ModemError("amplitude must be positive, preamble_s and ramp_us non-negative")
        if self.ramp_samples >= self.samples_per_bit // 2 and self.ramp_us > 0:
            raise ModemError(f"ramp of {self.ramp_us} us is longer than half a bit")

    @property
    def samples_per_bit(self) -> int:
        return int(self.sample_rate // self.bit_rate)

    @property
    def preamble_samples(self) -> int:
        return int(round(self.preamble_s * self.sample_rate))

    @property
    def ramp_samples(self) -> int:
        return int(round(self.ramp_us * 1e-6 * self.sample_rate))

    def burst_samples(self, n_bits: int) -> int:
        return self.preamble_samples + n_bits * self.samples_per_bit


@dataclass
class DetectedBurst:
    """One frame-locked burst recovered from an I/Q buffer."""

    bits: BitStream
    start_sample: int
    cfo_hz: float
    snr_db: float
    bit_confidence: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mode: Optional[FrameMode] = None
    sync_mismatches: int = 0

    def to_frame(self) -> Frame:
        return Frame(self.bits)


def modulate_burst(frame: Union[Frame, BitStream], cfg: ModemConfig) -> IqBuffer:
    """Synthesize the baseband burst of a frame."""
    cfg.validate()
    bits = frame.bits if isinstance(frame, Frame) else np.asarray(frame, dtype=np.uint8)
    sps = cfg.samples_per_bit
    half = sps // 2

    first_half = np.where(bits == 1, 1.0, -1.0)
    chips = np.empty((bits.size, sps))
    chips[:, :half] = first_half[:, None]
    chips[:, half:] = -first_half[:, None]

    phase = np.concatenate([np.zeros(cfg.preamble_samples), cfg.phase_dev * chips.ravel()])
    if cfg.ramp_samples > 1:
        phase = uniform_filter1d(phase, cfg.ramp_samples, mode="nearest")

    n = np.arange(phase.size)
    samples = cfg.amplitude * np.exp(1j * (phase + 2 * np.pi * cfg.carrier_offset * n / cfg.sample_rate))
    return IqBuffer(samples, cfg.sample_rate)


def estimate_cfo(preamble_iq: IqBuffer) -> float:
    """Dominant tone frequency (Hz) of an unmodulated carrier.

    FFT peak search with 8x zero padding, refined by parabolic interpolation
    of the peak magnitude.
    """
    fs = preamble_iq.sample_rate
    x = preamble_iq.samples
    if x.size < MIN_CFO_WINDOW_S * fs:
        raise CfoError(f"need at least {MIN_CFO_WINDOW_S * 1e3:.0f} ms of carrier, got {x.size / fs * 1e3:.1f} ms")

    nfft = 1 << int(math.ceil(math.log2(8 * x.size)))
    spectrum = np.abs(np.fft.fft(x, nfft))
    k = int(np.argmax(spectrum))
    a, b, c = spectrum[k - 1], spectrum[k], spectrum[(k + 1) % nfft]
    denominator = a - 2 * b + c
    delta = 0.5 * (a - c) / denominator if denominator != 0 else 0.0

    freq = (k + delta) * fs / nfft
    if freq >= fs / 2:
        freq -= fs
    return float(freq)


def _find_bursts(samples: np.ndarray, cfg: ModemConfig) -> List[Tuple[int, int]]:
    """Sample ranges holding carrier power well above the noise floor."""
    power = np.abs(samples) ** 2
    window = max(1, int(POWER_WINDOW_S * cfg.sample_rate))
    smoothed = np.maximum(uniform_filter1d(power, window, mode="nearest"), 0.0)
    peak = float(smoothed.max())
    if peak <= 0:
        return []

    floor = float(np.percentile(smoothed, NOISE_FLOOR_PERCENTILE))
    contrast_db = 10 * math.log10(peak / floor) if floor > 0 else math.inf
    if contrast_db < cfg.detect_threshold_db:
        envelope = np.sqrt(power)
        cv = float(envelope.std() / envelope.mean())
        logger.debug(f"no power contrast ({contrast_db:.1f} dB), envelope CV {cv:.2f}")
        return [(0, samples.size)] if cv < FLAT_ENVELOPE_CV else []

    threshold = max(math.sqrt(floor * peak), peak * 10 ** (-cfg.detect_threshold_db / 10))
    mask = np.concatenate([[0], (smoothed > threshold).astype(np.int8), [0]])
    edges = np.diff(mask)
    starts, stops = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)

    hangover = int(cfg.hangover_s * cfg.sample_rate)
    merged: List[List[int]] = []
    for start, stop in zip(starts, stops):
        if merged and start - merged[-1][1] < hangover:
            merged[-1][1] = stop
        else:
            merged.append([start, stop])

    pad = cfg.samples_per_bit
    min_length = cfg.preamble_samples // 2
    return [(max(0, int(start) - pad), min(samples.size, int(stop) + pad))
            for start, stop in merged if stop - start >= min_length]


def _manchester_decisions(y: np.ndarray, sps: int) -> np.ndarray:
    """First-half minus second-half integral for a bit starting at every sample."""
    half = sps // 2
    c = np.concatenate([[0.0], np.cumsum(y)])
    starts = np.arange(y.size - sps + 1)
    return 2 * c[starts + half] - c[starts] - c[starts + sps]


def _demodulate_burst(segment: np.ndarray, offset: int, cfg: ModemConfig) -> Optional[DetectedBurst]:
    fs = cfg.sample_rate
    sps = cfg.samples_per_bit
    n_pre = cfg.preamble_samples
    guard = int(PREAMBLE_GUARD_S * fs)
    if segment.size < n_pre // 2 + SHORT_LENGTH * sps:
        return None

    carrier = segment[guard:max(guard, n_pre - guard)]
    if carrier.size < MIN_CFO_WINDOW_S * fs:
        carrier = segment[:n_pre]
    try:
        cfo = estimate_cfo(IqBuffer(carrier, fs))
    except CfoError as e:
        logger.debug(f"burst at {offset}: {e}")
        return None

    n = np.arange(segment.size)
    corrected = segment * np.exp(-2j * np.pi * cfo * n / fs)
    reference = np.mean(corrected[guard:max(guard + 1, n_pre - guard)])
    if abs(reference) == 0:
        return None
    z = corrected * np.exp(-1j * np.angle(reference))
    y = z.imag

    decisions = _manchester_decisions(y, sps)
    whole = decisions.size // sps * sps
    if whole == 0:
        return None
    phase = int(np.argmax(np.abs(decisions[:whole]).reshape(-1, sps).sum(axis=0)))
    per_bit = decisions[phase::sps]
    bits = (per_bit > 0).astype(np.uint8)

    hit = None
    for candidate in find_sync(bits, cfg.max_sync_mismatches):
        o = candidate.offset
        if o + SHORT_LENGTH > bits.size:
            break
        length = LONG_LENGTH if bits[o + FORMAT_FLAG.first_bit - 1] else SHORT_LENGTH
        if o + length <= bits.size:
            hit = candidate
            break
    if hit is None:
        return None

    frame_bits = bits[hit.offset:hit.offset + length]
    strength = np.abs(per_bit[hit.offset:hit.offset + length])
    bit_start = phase + hit.offset * sps
    magnitude = np.add.reduceat(np.abs(y[bit_start:bit_start + length * sps]), np.arange(0, length * sps, sps))
    confidence = np.divide(strength, magnitude, out=np.zeros(length), where=magnitude > 0)

    pre_start = max(0, bit_start - n_pre + guard)
    preamble = z[pre_start:max(pre_start + 1, bit_start - guard)]
    mean = np.mean(preamble)
    variance = float(np.mean(np.abs(preamble - mean) ** 2))
    snr_db = SNR_CAP_DB if variance <= 0 else min(SNR_CAP_DB, 10 * math.log10(abs(mean) ** 2 / variance))

    start_sample = max(0, offset + bit_start - n_pre)
    logger.debug(f"burst at sample {start_sample}: {length} bits, cfo {cfo:+.2f} Hz, snr {snr_db:.1f} dB")
    return DetectedBurst(
        bits=frame_bits,
        start_sample=int(start_sample),
        cfo_hz=cfo,
        snr_db=float(snr_db),
        bit_confidence=confidence,
        mode=hit.mode,
        sync_mismatches=hit.mismatches,
    )


def demodulate_stream(iq: IqBuffer, cfg: ModemConfig) -> List[DetectedBurst]:
    """Detect and demodulate every burst in a buffer, in time order."""
    cfg.validate()
    if iq.sample_rate != cfg.sample_rate:
        raise ModemError(f"buffer sample rate {iq.sample_rate} differs from configured {cfg.sample_rate}")
    if len(iq) == 0:
        return []

    results = []
    for start, stop in _find_bursts(iq.samples, cfg):
        burst = _demodulate_burst(iq.samples[start:stop], start, cfg)
        if burst is not None:
            results.append(burst)
    logger.debug(f"{len(results)} burst(s) in {iq.duration_s:.2f} s")
    return results
