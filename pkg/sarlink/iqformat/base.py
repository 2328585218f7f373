"""Base I/Q file format interface."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Optional, Union
import logging

from ..radio.modem import IqBuffer

PathLike = Union[str, Path]


class IqFormatError(ValueError):
    """Malformed I/Q file or unknown format."""


class MissingSampleRate(IqFormatError):
    """No sample rate given and no sidecar metadata found."""


class UnsupportedFormat(IqFormatError):
    """No handler for a format name or file extension."""


def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta")


def read_sidecar(path: PathLike) -> Optional[float]:
    """Sample rate recorded next to an I/Q file, if any."""
    meta = sidecar_path(path)
    if not meta.exists():
        return None
    for line in meta.read_text().splitlines():
        key, _, value = line.partition("=")
        if key.strip() == "sample_rate":
            try:
                return float(value)
            except ValueError as e:
                raise IqFormatError(f"{meta}: bad sample_rate {value.strip()!r}") from e
    return None


def write_sidecar(path: PathLike, sample_rate: float) -> None:
    rate = int(sample_rate) if float(sample_rate).is_integer() else sample_rate
    sidecar_path(path).write_text(f"sample_rate={rate}\n")


class IqFileFormat(ABC):
    """Abstract base class for I/Q sample file formats."""

    extensions = ()

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def read_samples(self, path: Path):
        """Read raw samples from a file as a complex array."""

    @abstractmethod
    def write_samples(self, iq: IqBuffer, path: Path) -> None:
        """Write samples of a buffer to a file."""

    def header_sample_rate(self, path: Path) -> Optional[float]:
        """Sample rate stored inside the file itself, for formats that have one."""
        return None

    def read(self, path: PathLike, sample_rate: Optional[float] = None) -> IqBuffer:
        """Read a file; the rate comes from the argument, the file, or its sidecar."""
        path = Path(path)
        rate = sample_rate or self.header_sample_rate(path) or read_sidecar(path)
        if not rate:
            raise MissingSampleRate(f"{path}: sample rate not given and no {sidecar_path(path).name} found")
        samples = self.read_samples(path)
        self.logger.debug(f"Read {samples.size} samples from {path} at {rate} Hz")
        return IqBuffer(samples, rate)

    def write(self, iq: IqBuffer, path: PathLike) -> None:
        """Write a buffer and its sidecar metadata."""
        path = Path(path)
        self.write_samples(iq, path)
        write_sidecar(path, iq.sample_rate)
        self.logger.debug(f"Wrote {len(iq)} samples to {path}")

    def get_format_name(self) -> str:
        return self.__class__.__name__.replace('Format', '').lower()

    def get_format_info(self) -> Dict[str, str]:
        return {
            'format': self.get_format_name(),
            'extensions': ", ".join(self.extensions),
        }
