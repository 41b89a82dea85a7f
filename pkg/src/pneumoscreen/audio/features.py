"""Per-segment acoustic features: MFCC statistics, deltas, and six LLDs
summarized by eight statistics, yielding a fixed 126-dimensional vector.

Framing: 25 ms windows, 10 ms hop (400/160 samples at 16 kHz), Hann window,
512-point FFT, 26 triangular mel filters on 0-8000 Hz, log floor 1e-10,
orthonormal DCT-II keeping 13 coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from pneumoscreen.audio.pipeline import TARGET_RATE, Segment
from pneumoscreen.errors import TooFewFrames

FRAME_LENGTH = 400  # 25 ms at 16 kHz
HOP_LENGTH = 160  # 10 ms
N_FFT = 512
N_MELS = 26
N_MFCC = 13
FMIN = 0.0
FMAX = 8000.0
LOG_FLOOR = 1e-10
DELTA_HALF_WINDOW = 2
ROLLOFF_FRACTION = 0.85

LLD_NAMES = ("rms", "zcr", "centroid", "bandwidth", "rolloff", "flatness")
STAT_NAMES = ("mean", "std", "min", "max", "p25", "p75", "skew", "kurt")

FEATURE_DIMENSION = 126


def _build_feature_names() -> tuple[str, ...]:
    names = []
    for block in ("mfcc", "delta", "delta2"):
        for stat in ("mean", "std"):
            names.extend(f"{block}_{stat}_{k:02d}" for k in range(N_MFCC))
    for lld in LLD_NAMES:
        names.extend(f"{lld}_{stat}" for stat in STAT_NAMES)
    return tuple(names)


FEATURE_NAMES: tuple[str, ...] = _build_feature_names()
assert len(FEATURE_NAMES) == FEATURE_DIMENSION


@dataclass(frozen=True)
class MfccMatrix:
    values: np.ndarray  # (K, T)

    @property
    def n_coefficients(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AcousticFeatureVector:
    values: np.ndarray  # (126,)
    names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self) -> None:
        if self.values.shape != (FEATURE_DIMENSION,):
            raise ValueError(
                f"expected {FEATURE_DIMENSION} features, got {self.values.shape}"
            )


def frame_signal(samples: np.ndarray) -> np.ndarray:
    """Slice into (T, frame_length) frames; T = floor((N - frame)/hop) + 1."""
    n_frames = (samples.size - FRAME_LENGTH) // HOP_LENGTH + 1
    idx = np.arange(FRAME_LENGTH)[None, :] + HOP_LENGTH * np.arange(n_frames)[:, None]
    return samples[idx]


def hann_window(length: int = FRAME_LENGTH) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / (length - 1))


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=float) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=float) / 2595.0) - 1.0)


def mel_filterbank(
    n_mels: int = N_MELS, n_fft: int = N_FFT, rate: int = TARGET_RATE
) -> np.ndarray:
    """Triangular mel filters over FFT bins, (n_mels, n_fft//2 + 1)."""
    mel_points = np.linspace(hz_to_mel(FMIN), hz_to_mel(FMAX), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    bin_freqs = np.arange(n_fft // 2 + 1) * rate / n_fft
    bank = np.zeros((n_mels, n_fft // 2 + 1))
    for m in range(n_mels):
        lower, center, upper = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        rising = (bin_freqs - lower) / (center - lower)
        falling = (upper - bin_freqs) / (upper - center)
        bank[m] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


def power_spectrum(samples: np.ndarray) -> np.ndarray:
    """Hann-windowed magnitude-squared FFT per frame, (T, n_fft//2 + 1)."""
    frames = frame_signal(samples) * hann_window()
    spectrum = np.fft.rfft(frames, n=N_FFT, axis=1)
    return np.abs(spectrum) ** 2


def mfcc(seg: Segment, n_coefficients: int = N_MFCC) -> MfccMatrix:
    """MFCC matrix (K x T) for one segment."""
    power = power_spectrum(seg.samples)
    mel_energy = power @ mel_filterbank().T
    log_energy = np.log(np.maximum(mel_energy, LOG_FLOOR))
    coeffs = dct(log_energy, type=2, norm="ortho", axis=1)[:, :n_coefficients]
    return MfccMatrix(values=coeffs.T)


def mfcc_statistics(matrix: MfccMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Per-coefficient temporal mean and population std (divisor T)."""
    means = matrix.values.mean(axis=1)
    stds = matrix.values.std(axis=1)  # population, ddof=0
    return means, stds


def deltas(matrix: MfccMatrix, order: int = 1) -> MfccMatrix:
    """Regression delta, half-window 2, edge replication; order 2 iterates."""
    values = matrix.values
    if values.shape[1] < 3:
        raise TooFewFrames(f"need at least 3 frames, got {values.shape[1]}")
    for _ in range(order):
        n = DELTA_HALF_WINDOW
        padded = np.pad(values, ((0, 0), (n, n)), mode="edge")
        num = sum(
            k * (padded[:, n + k : padded.shape[1] - n + k]
                 - padded[:, n - k : padded.shape[1] - n - k])
            for k in range(1, n + 1)
        )
        values = num / (2.0 * sum(k * k for k in range(1, n + 1)))
    return MfccMatrix(values=values)


def _spectral_llds(power: np.ndarray) -> dict[str, np.ndarray]:
    """Centroid, bandwidth, rolloff (magnitude spectrum), flatness (power)."""
    magnitude = np.sqrt(power)
    freqs = np.arange(N_FFT // 2 + 1) * TARGET_RATE / N_FFT
    mag_total = magnitude.sum(axis=1)
    safe_total = np.where(mag_total > 0, mag_total, 1.0)
    centroid = (magnitude * freqs).sum(axis=1) / safe_total
    centroid = np.where(mag_total > 0, centroid, 0.0)
    spread = ((freqs[None, :] - centroid[:, None]) ** 2 * magnitude).sum(axis=1)
    bandwidth = np.sqrt(spread / safe_total)
    bandwidth = np.where(mag_total > 0, bandwidth, 0.0)
    cumulative = np.cumsum(magnitude, axis=1)
    target = ROLLOFF_FRACTION * cumulative[:, -1:]
    rolloff_bin = np.argmax(cumulative >= target, axis=1)
    rolloff = np.where(mag_total > 0, freqs[rolloff_bin], 0.0)
    floored = np.maximum(power, LOG_FLOOR)
    flatness = np.exp(np.mean(np.log(floored), axis=1)) / np.mean(floored, axis=1)
    return {
        "centroid": centroid,
        "bandwidth": bandwidth,
        "rolloff": rolloff,
        "flatness": flatness,
    }


def lld_features(seg: Segment) -> dict[str, np.ndarray]:
    """Six per-frame low-level descriptors, keyed by LLD_NAMES."""
    frames = frame_signal(seg.samples)
    rms = np.sqrt(np.mean(frames**2, axis=1))
    signs = np.sign(frames)
    crossings = np.sum(np.abs(np.diff(signs, axis=1)) > 0, axis=1)
    zcr = crossings / FRAME_LENGTH
    out = {"rms": rms, "zcr": zcr}
    out.update(_spectral_llds(power_spectrum(seg.samples)))
    return out


def summarize(values: np.ndarray) -> np.ndarray:
    """Eight summary statistics: mean, std, min, max, p25, p75, skew, kurt.

    Percentiles use linear interpolation; skewness and excess kurtosis are
    defined as 0 when the variance is 0.
    """
    values = np.asarray(values, dtype=float)
    mean = values.mean()
    m2 = np.mean((values - mean) ** 2)
    if m2 > 0:
        m3 = np.mean((values - mean) ** 3)
        m4 = np.mean((values - mean) ** 4)
        skew = m3 / m2**1.5
        kurt = m4 / m2**2 - 3.0
    else:
        skew = 0.0
        kurt = 0.0
    return np.array(
        [
            mean,
            np.sqrt(m2),
            values.min(),
            values.max(),
            np.percentile(values, 25),
            np.percentile(values, 75),
            skew,
            kurt,
        ]
    )


def feature_vector(seg: Segment) -> AcousticFeatureVector:
    """Concatenate MFCC/delta/delta2 mean+std with the 8-stat LLD summaries."""
    base = mfcc(seg)
    d1 = deltas(base, order=1)
    d2 = deltas(base, order=2)
    parts = []
    for matrix in (base, d1, d2):
        means, stds = mfcc_statistics(matrix)
        parts.append(means)
        parts.append(stds)
    llds = lld_features(seg)
    for name in LLD_NAMES:
        parts.append(summarize(llds[name]))
    values = np.concatenate(parts)
    return AcousticFeatureVector(values=values)


def features_to_csv(vectors: list[AcousticFeatureVector]) -> str:
    """CSV with the feature names as header, 9 significant digits."""
    lines = [",".join(FEATURE_NAMES)]
    for vec in vectors:
        lines.append(",".join(f"{v:.9g}" for v in vec.values))
    return "\n".join(lines) + "\n"
