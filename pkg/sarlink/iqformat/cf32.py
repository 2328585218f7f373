"""Interleaved little-endian float32 I/Q."""

from pathlib import Path

import numpy as np

from ..radio.modem import IqBuffer
from .base import IqFileFormat, IqFormatError


class Cf32Format(IqFileFormat):
    """I,Q pairs of 32-bit little-endian floats."""

    extensions = (".cf32", ".cfile", ".fc32")

    def read_samples(self, path: Path) -> np.ndarray:
        raw = np.fromfile(path, dtype="<f4")
        if raw.size % 2:
            raise IqFormatError(f"{path}: odd number of float32 values ({raw.size})")
        return raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)

    def write_samples(self, iq: IqBuffer, path: Path) -> None:
        interleaved = np.empty(2 * len(iq), dtype="<f4")
        interleaved[0::2] = iq.samples.real
        interleaved[1::2] = iq.samples.imag
        interleaved.tofile(path)
