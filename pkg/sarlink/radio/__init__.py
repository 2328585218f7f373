"""Baseband modem and channel simulation."""

from .modem import (
    IqBuffer, ModemConfig, DetectedBurst, ModemError, CfoError,
    modulate_burst, demodulate_stream, estimate_cfo,
)
from .channel import ChannelEvent, ChannelPlan, ChannelError, awgn, freq_shift, schedule_mix

__all__ = [
    'IqBuffer', 'ModemConfig', 'DetectedBurst', 'ModemError', 'CfoError',
    'modulate_burst', 'demodulate_stream', 'estimate_cfo',
    'ChannelEvent', 'ChannelPlan', 'ChannelError', 'awgn', 'freq_shift', 'schedule_mix',
]
