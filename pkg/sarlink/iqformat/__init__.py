"""I/Q sample file formats."""

from .base import IqFileFormat, IqFormatError, MissingSampleRate, UnsupportedFormat, read_sidecar, write_sidecar
from .cf32 import Cf32Format
from .cu8 import Cu8Format
from .wav import WavFormat
from .factory import IqFormatFactory

__all__ = [
    'IqFileFormat', 'IqFormatError', 'MissingSampleRate', 'UnsupportedFormat', 'read_sidecar', 'write_sidecar',
    'Cf32Format', 'Cu8Format', 'WavFormat', 'IqFormatFactory',
]
