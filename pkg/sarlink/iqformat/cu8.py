"""Interleaved unsigned 8-bit I/Q (RTL-SDR style)."""

from pathlib import Path

import numpy as np

from ..radio.modem import IqBuffer
from .base import IqFileFormat, IqFormatError

ZERO_LEVEL = 127.5


class Cu8Format(IqFileFormat):
    """I,Q pairs of unsigned bytes with zero at 127.5; full scale is +/-1."""

    extensions = (".cu8", ".u8")

    def read_samples(self, path: Path) -> np.ndarray:
        raw = np.fromfile(path, dtype=np.uint8).astype(np.float64)
        if raw.size % 2:
            raise IqFormatError(f"{path}: odd number of bytes ({raw.size})")
        scaled = (raw - ZERO_LEVEL) / ZERO_LEVEL
        return scaled[0::2] + 1j * scaled[1::2]

    def write_samples(self, iq: IqBuffer, path: Path) -> None:
        peak = np.max(np.abs(np.concatenate([iq.samples.real, iq.samples.imag]))) if len(iq) else 0.0
        if peak > 1.0:
            self.logger.warning(f"{path}: samples exceed full scale ({peak:.2f}), clipping")
        interleaved = np.empty(2 * len(iq))
        interleaved[0::2] = iq.samples.real
        interleaved[1::2] = iq.samples.imag
        quantized = np.clip(np.round(interleaved * ZERO_LEVEL + ZERO_LEVEL), 0, 255).astype(np.uint8)
        quantized.tofile(path)
