"""I/Q format factory."""

from pathlib import Path
from typing import Dict, List, Type, Union

from .base import IqFileFormat, UnsupportedFormat
from .cf32 import Cf32Format
from .cu8 import Cu8Format
from .wav import WavFormat


class IqFormatFactory:
    """Factory class for creating I/Q file format handlers."""

    formats: Dict[str, Type[IqFileFormat]] = {
        'cf32': Cf32Format,
        'cu8': Cu8Format,
        'wav': WavFormat,
    }

    def create(self, name: str) -> IqFileFormat:
        """Create the handler for a format name."""
        name = name.lower()
        if name not in self.formats:
            raise UnsupportedFormat(f"Unsupported I/Q format: {name}")
        return self.formats[name]()

    def from_path(self, path: Union[str, Path]) -> IqFileFormat:
        """Create the handler matching a file extension."""
        suffix = Path(path).suffix.lower()
        for name, format_class in self.formats.items():
            if suffix in format_class.extensions:
                return self.create(name)
        raise UnsupportedFormat(f"Cannot infer I/Q format from extension {suffix!r} of {path}")

    def get_available_formats(self) -> List[str]:
        return list(self.formats)
