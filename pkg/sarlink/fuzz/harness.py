"""Fuzz campaign runner: feeds corpora to the decoder and demodulator."""

import logging
import math
import time
import traceback
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Union

import numpy as np

from ..codec.beacon import BeaconProtocol, BeaconReport
from ..codec.protocols import decode_frame, encode_beacon
from ..frame.bitframe import FRAME_LENGTHS, LONG_LENGTH, Frame, frame_to_hex, hex_id_of
from ..radio.channel import awgn, freq_shift
from ..radio.modem import DetectedBurst, IqBuffer, ModemConfig, demodulate_stream, modulate_burst
from .corpus import CorpusItem, HostileKind, random_spec

HANG_TIMEOUT_S = 1.0


class FindingKind(str, Enum):
    CRASH = "crash"
    HANG = "hang"
    INVARIANT_VIOLATION = "invariant_violation"


@dataclass
class Finding:
    """One abnormal outcome of a campaign."""

    index: int
    kind: FindingKind
    detail: str
    item: str = ""


@dataclass
class CampaignResult:
    """Counts and findings of one campaign."""

    target: str
    total: int = 0
    ok: int = 0
    findings: List[Finding] = field(default_factory=list)
    elapsed_s: float = 0.0

    def count(self, kind: FindingKind) -> int:
        return sum(1 for finding in self.findings if finding.kind is kind)

    @property
    def crashes(self) -> int:
        return self.count(FindingKind.CRASH)

    @property
    def hangs(self) -> int:
        return self.count(FindingKind.HANG)

    @property
    def violations(self) -> int:
        return self.count(FindingKind.INVARIANT_VIOLATION)

    @property
    def clean(self) -> bool:
        return not self.findings

    def summary(self) -> str:
        return (f"{self.target}: {self.total} item(s), {self.ok} ok, {self.crashes} crash(es), "
                f"{self.hangs} hang(s), {self.violations} invariant violation(s) in {self.elapsed_s:.1f} s")


def report_violations(report: BeaconReport, kind: Optional[str] = None) -> List[str]:
    """Invariants every decoder report must satisfy, whatever the input."""
    problems = []
    if report.hex_id != hex_id_of(report.raw_frame) or len(report.hex_id) != 15:
        problems.append(f"hex_id {report.hex_id!r} does not match the decoded frame")
    if report.protocol is BeaconProtocol.UNKNOWN and report.identity is not None:
        problems.append("unknown protocol reported with an identity")
    if (report.bch2 is None) != (len(report.raw_frame) != LONG_LENGTH):
        problems.append("BCH-2 result presence disagrees with the frame length")
    if kind == HostileKind.BCH_STALE.value and report.clean:
        problems.append("stale parity accepted as clean")
    position = report.decoded_position
    if position is not None and not (abs(position.latitude) <= 90 and abs(position.longitude) <= 180):
        problems.append(f"position out of range: {position}")
    return problems


def burst_violations(burst: DetectedBurst, n_samples: int) -> List[str]:
    """Invariants every demodulator burst must satisfy."""
    problems = []
    if len(burst.bits) not in FRAME_LENGTHS:
        problems.append(f"frame-locked burst with {len(burst.bits)} bits")
    if not 0 <= burst.start_sample < n_samples:
        problems.append(f"start_sample {burst.start_sample} outside buffer of {n_samples}")
    if not (math.isfinite(burst.cfo_hz) and math.isfinite(burst.snr_db)):
        problems.append("non-finite CFO or SNR estimate")
    confidence = np.asarray(burst.bit_confidence)
    if confidence.size and (confidence.min() < 0 or confidence.max() > 1 + 1e-9):
        problems.append("bit confidence outside [0, 1]")
    return problems


class FuzzHarness:
    """Runs corpus items through a target and classifies every outcome."""

    def __init__(self, hang_timeout_s: float = HANG_TIMEOUT_S):
        self.hang_timeout_s = hang_timeout_s
        self.logger = logging.getLogger(__name__)

    def _run(self, target: str, items: Sequence, call: Callable, check: Callable,
             describe: Callable) -> CampaignResult:
        result = CampaignResult(target=target, total=len(items))
        campaign_start = time.perf_counter()

        for index, item in enumerate(items):
            start = time.perf_counter()
            try:
                outcome = call(item)
            except Exception as e:
                self.logger.error(f"{target} item {index} crashed: {e}")
                result.findings.append(Finding(index, FindingKind.CRASH,
                                               traceback.format_exc(limit=5), describe(item)))
                continue
            elapsed = time.perf_counter() - start

            problems = check(item, outcome)
            if elapsed > self.hang_timeout_s:
                problems = problems + [f"took {elapsed:.2f} s"]
                result.findings.append(Finding(index, FindingKind.HANG, "; ".join(problems), describe(item)))
            elif problems:
                result.findings.append(Finding(index, FindingKind.INVARIANT_VIOLATION,
                                               "; ".join(problems), describe(item)))
            else:
                result.ok += 1

        result.elapsed_s = time.perf_counter() - campaign_start
        self.logger.info(result.summary())
        return result

    def run_decode(self, items: Iterable[Union[CorpusItem, Frame]]) -> CampaignResult:
        """Feed frames to the decoder."""
        items = [item if isinstance(item, CorpusItem) else CorpusItem(item, "") for item in items]
        return self._run(
            "decode_frame", items,
            call=lambda item: decode_frame(item.frame),
            check=lambda item, report: report_violations(report, item.kind),
            describe=lambda item: frame_to_hex(item.frame) if isinstance(item.frame, Frame) else repr(item.frame),
        )

    def run_demod(self, buffers: Iterable[IqBuffer], cfg: ModemConfig) -> CampaignResult:
        """Feed I/Q buffers to the demodulator and decode what it locks onto."""
        def call(iq: IqBuffer):
            bursts = demodulate_stream(iq, cfg)
            return bursts, [decode_frame(burst.to_frame()) for burst in bursts]

        def check(iq: IqBuffer, outcome) -> List[str]:
            bursts, reports = outcome
            problems = [p for burst in bursts for p in burst_violations(burst, len(iq))]
            return problems + [p for report in reports for p in report_violations(report)]

        return self._run("demodulate_stream", list(buffers), call, check,
                         describe=lambda iq: f"{len(iq)} samples")


def impaired_buffers(seed: int, n: int, cfg: Optional[ModemConfig] = None) -> List[IqBuffer]:
    """Seeded I/Q buffers with random noise, offset, truncation and padding.

    Every fifth buffer carries no burst at all (noise only or silence).
    """
    cfg = cfg or ModemConfig()
    rng = np.random.default_rng(seed)
    fs = cfg.sample_rate
    buffers = []

    for index in range(n):
        item_seed = int(rng.integers(2 ** 32))
        if index % 5 == 4:
            length = int(rng.integers(1, fs))
            silence = IqBuffer(np.zeros(length), fs)
            buffers.append(awgn(silence, 0.0, item_seed) if rng.random() < 0.5 else silence)
            continue

        iq = modulate_burst(encode_beacon(random_spec(rng)), cfg)
        lead, tail = (int(x) for x in rng.integers(0, fs // 4, 2))
        samples = np.concatenate([np.zeros(lead), iq.samples, np.zeros(tail)])
        if rng.random() < 0.3:
            cut = int(rng.integers(1, samples.size))
            samples = samples[:cut] if rng.random() < 0.5 else samples[cut:]
        impaired = IqBuffer(samples, fs)
        impaired = freq_shift(impaired, float(rng.uniform(-500.0, 500.0)))
        impaired = awgn(impaired, float(rng.uniform(-10.0, 40.0)), item_seed)
        buffers.append(impaired)

    return buffers
