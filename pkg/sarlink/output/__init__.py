"""Output writers: decode records and waterfall images."""

from .report_writer import RECORD_KEYS, ReportWriter, decode_record
from .waterfall import BurstAnnotation, WaterfallRenderer

__all__ = ['RECORD_KEYS', 'ReportWriter', 'decode_record', 'BurstAnnotation', 'WaterfallRenderer']
