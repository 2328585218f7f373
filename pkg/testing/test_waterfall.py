"""Tests for waterfall rendering."""

import numpy as np
from PIL import Image

from sarlink.codec.protocols import encode_beacon
from sarlink.output import BurstAnnotation, WaterfallRenderer
from sarlink.radio.modem import IqBuffer, modulate_burst


def test_render_size(settings, mmsi_spec, fast_modem):
    iq = modulate_burst(encode_beacon(mmsi_spec), fast_modem)
    image = WaterfallRenderer(settings).render(iq)
    assert image.size == (settings.waterfall_width, settings.waterfall_height)
    assert image.mode == "RGB"


def test_tiny_buffer_is_black(settings):
    image = WaterfallRenderer(settings).render(IqBuffer(np.zeros(1), 8000))
    assert image.getextrema() == ((0, 0), (0, 0), (0, 0))


def test_tone_lands_on_its_row(settings):
    fs, tone_hz = 8000, 1000.0
    n = np.arange(fs)
    renderer = WaterfallRenderer(settings)
    db = renderer.spectrogram_db(IqBuffer(np.exp(2j * np.pi * tone_hz * n / fs), fs))
    nfft = settings.waterfall_fft_size
    freqs = np.fft.fftshift(np.fft.fftfreq(nfft, 1 / fs))[::-1]
    row = int(np.argmax(db.mean(axis=1)))
    assert abs(freqs[row] - tone_hz) <= fs / nfft


def test_annotations_are_drawn(settings, mmsi_spec, fast_modem):
    iq = modulate_burst(encode_beacon(mmsi_spec), fast_modem)
    renderer = WaterfallRenderer(settings)
    plain = np.asarray(renderer.render(iq))
    marked = np.asarray(renderer.render(iq, [BurstAnnotation(0.0, iq.duration_s, 0.0, "ABCDEF")]))
    changed = np.any(plain != marked, axis=2)
    assert changed.any()
    # the box outline is green for a clean burst
    assert (marked[changed] == (0, 128, 0)).all(axis=1).any()


def test_save_png(tmp_path, settings):
    renderer = WaterfallRenderer(settings)
    path = tmp_path / "w.png"
    renderer.save(renderer.render(IqBuffer(np.ones(4000, dtype=complex), 8000)), path)
    with Image.open(path) as image:
        assert image.format == "PNG"
