"""Waterfall (spectrogram) images of I/Q buffers with detected bursts marked."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from scipy.signal import spectrogram

from ..codec.bch import CheckStatus
from ..config.settings import SarlinkSettings
from ..radio.modem import IqBuffer

STATUS_COLORS = {
    CheckStatus.CLEAN.value: "green",
    CheckStatus.CORRECTED.value: "yellow",
    CheckStatus.UNCORRECTABLE.value: "orange",
}
DYNAMIC_RANGE_DB = 60.0


@dataclass
class BurstAnnotation:
    """A time/frequency box to draw over the waterfall."""

    start_s: float
    end_s: float
    center_hz: float
    label: str
    status: str = CheckStatus.CLEAN.value
    half_width_hz: float = 1200.0


class WaterfallRenderer:
    """Renders spectrogram images annotated with decoded bursts."""

    def __init__(self, settings: SarlinkSettings):
        self.settings = settings
        self.logger = logging.getLogger(__name__)
        self.font = self._load_font()

    def _load_font(self) -> Optional[ImageFont.ImageFont]:
        try:
            return ImageFont.load_default()
        except Exception as e:
            self.logger.warning(f"Could not load font: {e}")
            return None

    def spectrogram_db(self, iq: IqBuffer) -> np.ndarray:
        """Power in dB, rows from the highest to the lowest frequency."""
        nperseg = min(self.settings.waterfall_fft_size, max(1, len(iq)))
        _, _, power = spectrogram(iq.samples, fs=iq.sample_rate, nperseg=nperseg,
                                  noverlap=nperseg // 2, return_onesided=False, mode="psd")
        power = np.fft.fftshift(power, axes=0)[::-1]
        return 10 * np.log10(power + 1e-20)

    def render(self, iq: IqBuffer, annotations: Optional[List[BurstAnnotation]] = None) -> Image.Image:
        """Build the waterfall image: time left to right, frequency bottom to top."""
        width, height = self.settings.waterfall_width, self.settings.waterfall_height
        if len(iq) < 2:
            return Image.new("RGB", (width, height), "black")

        db = self.spectrogram_db(iq)
        top = float(db.max())
        scaled = np.clip((db - (top - DYNAMIC_RANGE_DB)) / DYNAMIC_RANGE_DB, 0.0, 1.0)
        image = Image.fromarray((scaled * 255).astype(np.uint8))
        image = image.resize((width, height), Image.BILINEAR).convert("RGB")

        for annotation in annotations or []:
            self._draw_annotation(ImageDraw.Draw(image), annotation, iq)
        self.logger.info(f"Rendered {width}x{height} waterfall with {len(annotations or [])} burst(s)")
        return image

    def _draw_annotation(self, draw: ImageDraw.ImageDraw, annotation: BurstAnnotation, iq: IqBuffer):
        width, height = self.settings.waterfall_width, self.settings.waterfall_height
        fs = iq.sample_rate

        def x_of(t: float) -> float:
            return min(width - 1, max(0, t / iq.duration_s * width))

        def y_of(hz: float) -> float:
            return min(height - 1, max(0, (0.5 - hz / fs) * height))

        x1, x2 = x_of(annotation.start_s), x_of(annotation.end_s)
        y1 = y_of(annotation.center_hz + annotation.half_width_hz)
        y2 = y_of(annotation.center_hz - annotation.half_width_hz)
        color = STATUS_COLORS.get(annotation.status, "orange")
        draw.rectangle([x1, y1, x2, y2], outline=color, width=2)
        draw.text((x1 + 2, max(y1 - 14, 2)), annotation.label,
                  fill=self.settings.annotation_text_color, font=self.font)

    def save(self, image: Image.Image, path: Union[str, Path]) -> None:
        image.save(path, format="PNG")
        self.logger.info(f"Saved waterfall to {path}")
