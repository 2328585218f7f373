"""Phase-discriminator audio as 16-bit mono WAV."""

from pathlib import Path
from typing import Optional

import numpy as np
from scipy.io import wavfile

from ..radio.modem import IqBuffer
from .base import IqFileFormat, IqFormatError

FULL_SCALE = 32767


class WavFormat(IqFileFormat):
    """Instantaneous phase angle(x)/pi as PCM; reading restores exp(j*pi*a)."""

    extensions = (".wav",)

    def header_sample_rate(self, path: Path) -> Optional[float]:
        rate, _ = wavfile.read(path, mmap=True)
        return float(rate)

    def read_samples(self, path: Path) -> np.ndarray:
        _, data = wavfile.read(path)
        if data.ndim != 1:
            raise IqFormatError(f"{path}: expected mono audio, got {data.shape[1]} channels")
        if np.issubdtype(data.dtype, np.integer):
            audio = data.astype(np.float64) / np.iinfo(data.dtype).max
        else:
            audio = data.astype(np.float64)
        return np.exp(1j * np.pi * np.clip(audio, -1.0, 1.0))

    def write_samples(self, iq: IqBuffer, path: Path) -> None:
        audio = np.round(np.angle(iq.samples) / np.pi * FULL_SCALE).astype(np.int16)
        wavfile.write(path, int(round(iq.sample_rate)), audio)
