"""Bit-exact beacon frame container."""

from .bitframe import (
    Frame, FrameFormat, FrameMode, FieldWindow, SyncHit, BitStream,
    FrameError, WindowOutOfRange, ValueOverflow, BadLength, NonHexCharacter,
    FrameInvariantError, SyncViolation,
    field_access, hex_id_of, find_sync, frame_to_hex, frame_from_hex,
)

__all__ = [
    'Frame', 'FrameFormat', 'FrameMode', 'FieldWindow', 'SyncHit', 'BitStream',
    'FrameError', 'WindowOutOfRange', 'ValueOverflow', 'BadLength', 'NonHexCharacter',
    'FrameInvariantError', 'SyncViolation',
    'field_access', 'hex_id_of', 'find_sync', 'frame_to_hex', 'frame_from_hex',
]
