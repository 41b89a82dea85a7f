"""Front-end preprocessing: resample to 16 kHz, segment, peak-normalize.

The resampler is a windowed-sinc interpolator (Kaiser window, beta 8.6,
32 taps per output sample).  Spectral features are the product of this
pipeline, so a linear interpolator would alias into centroid/rolloff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pneumoscreen.audio.wavio import Waveform
from pneumoscreen.errors import TooShort

TARGET_RATE = 16_000
SEGMENT_SECONDS = 2.0
SEGMENT_SAMPLES = int(SEGMENT_SECONDS * TARGET_RATE)  # 32000
PEAK_TARGET = 0.95

_KAISER_BETA = 8.6
_TAPS = 32  # total taps per output sample (16 each side)


def _kaiser(x: np.ndarray, half_width: float) -> np.ndarray:
    """Kaiser window evaluated at continuous offsets x in [-half, half]."""
    arg = 1.0 - (x / half_width) ** 2
    arg = np.clip(arg, 0.0, None)
    return np.i0(_KAISER_BETA * np.sqrt(arg)) / np.i0(_KAISER_BETA)


def resample(samples: np.ndarray, rate_in: int, rate_out: int = TARGET_RATE) -> np.ndarray:
    """Arbitrary-ratio windowed-sinc resampling."""
    if rate_in == rate_out:
        return samples.astype(np.float64, copy=True)
    n_in = samples.size
    n_out = int(np.floor(n_in * rate_out / rate_in))
    half = _TAPS // 2
    # anti-aliasing cutoff relative to the input Nyquist
    cutoff = min(1.0, rate_out / rate_in)
    positions = np.arange(n_out) * (rate_in / rate_out)
    base = np.floor(positions).astype(int)
    frac = positions - base
    offsets = np.arange(-half + 1, half + 1)  # 32 taps
    idx = base[:, None] + offsets[None, :]
    t = offsets[None, :] - frac[:, None]  # tap positions relative to output time
    kernel = cutoff * np.sinc(cutoff * t) * _kaiser(t, half)
    kernel /= kernel.sum(axis=1, keepdims=True)  # unity DC gain per output
    padded = np.pad(samples.astype(np.float64), half + 1, mode="constant")
    gathered = padded[idx + half + 1]
    return np.einsum("ij,ij->i", gathered, kernel)


@dataclass(frozen=True)
class Segment:
    """Exactly 2 s of 16 kHz audio, independently peak-normalized."""

    samples: np.ndarray
    index: int

    def __post_init__(self) -> None:
        if self.samples.size != SEGMENT_SAMPLES:
            raise ValueError(
                f"segment must have {SEGMENT_SAMPLES} samples, got {self.samples.size}"
            )


def _peak_normalize(samples: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(samples))
    if peak == 0.0:
        return samples
    return samples * (PEAK_TARGET / peak)


def preprocess(waveform: Waveform) -> list[Segment]:
    """Resample to 16 kHz, split into complete 2 s segments, peak-normalize.

    Trailing partial segments are discarded; all-zero segments bypass
    normalization.
    """
    resampled = resample(waveform.samples, waveform.sample_rate)
    n_segments = resampled.size // SEGMENT_SAMPLES
    if n_segments == 0:
        raise TooShort(
            f"{resampled.size} samples after resampling; need {SEGMENT_SAMPLES}"
        )
    segments = []
    for i in range(n_segments):
        chunk = resampled[i * SEGMENT_SAMPLES : (i + 1) * SEGMENT_SAMPLES]
        segments.append(Segment(samples=_peak_normalize(chunk), index=i))
    return segments
