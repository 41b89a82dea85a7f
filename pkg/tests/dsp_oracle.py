"""Independent brute-force reference implementations for the DSP tests.

Everything here is computed with explicit DFT sums and loop-built filter
banks, deliberately avoiding np.fft/scipy.fft so it can serve as an oracle
for the production pipeline.  Slow by design; used only on small inputs.
"""

from __future__ import annotations

import numpy as np

FRAME_LENGTH = 400
HOP_LENGTH = 160
N_FFT = 512
N_MELS = 26
N_MFCC = 13
RATE = 16_000
FMAX = 8000.0
LOG_FLOOR = 1e-10


def frames_of(samples: np.ndarray) -> list[np.ndarray]:
    n = (samples.size - FRAME_LENGTH) // HOP_LENGTH + 1
    return [samples[i * HOP_LENGTH : i * HOP_LENGTH + FRAME_LENGTH] for i in range(n)]


def hann(length: int = FRAME_LENGTH) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / (length - 1))


def _dft_tables() -> tuple[np.ndarray, np.ndarray]:
    bins = N_FFT // 2 + 1
    k = np.arange(bins)[:, None]
    n = np.arange(N_FFT)[None, :]
    angle = 2.0 * np.pi * k * n / N_FFT
    return np.cos(angle), -np.sin(angle)


_COS, _SIN = _dft_tables()


def dft_magnitude_squared(frame: np.ndarray) -> np.ndarray:
    """Power spectrum of a windowed frame by direct DFT summation
    (tabulated cosines/sines; no FFT anywhere)."""
    x = np.zeros(N_FFT)
    x[: frame.size] = frame * hann(frame.size)
    re = _COS @ x
    im = _SIN @ x
    return re * re + im * im


def mel_bank() -> np.ndarray:
    def to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def to_hz(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    edges = [to_hz(to_mel(0.0) + (to_mel(FMAX) - to_mel(0.0)) * i / (N_MELS + 1))
             for i in range(N_MELS + 2)]
    bins = N_FFT // 2 + 1
    bank = np.zeros((N_MELS, bins))
    for m in range(N_MELS):
        lo, mid, hi = edges[m], edges[m + 1], edges[m + 2]
        for b in range(bins):
            f = b * RATE / N_FFT
            if lo <= f <= mid and mid > lo:
                bank[m, b] = (f - lo) / (mid - lo)
            elif mid < f <= hi and hi > mid:
                bank[m, b] = (hi - f) / (hi - mid)
    return bank


def dct2_ortho(vector: np.ndarray, n_keep: int) -> np.ndarray:
    """Orthonormal DCT-II by direct cosine summation."""
    n = vector.size
    out = np.zeros(n_keep)
    for k in range(n_keep):
        s = np.sum(vector * np.cos(np.pi * k * (2 * np.arange(n) + 1) / (2 * n)))
        scale = np.sqrt(1.0 / (4 * n)) if k == 0 else np.sqrt(1.0 / (2 * n))
        out[k] = 2.0 * s * scale
    return out


def mfcc_matrix(samples: np.ndarray) -> np.ndarray:
    """Reference MFCC matrix (K x T)."""
    bank = mel_bank()
    columns = []
    for frame in frames_of(samples):
        power = dft_magnitude_squared(frame)
        mel_energy = bank @ power
        log_energy = np.log(np.maximum(mel_energy, LOG_FLOOR))
        columns.append(dct2_ortho(log_energy, N_MFCC))
    return np.array(columns).T


def spectral_descriptors(samples: np.ndarray) -> dict[str, np.ndarray]:
    """Reference centroid/bandwidth/rolloff/flatness per frame."""
    freqs = np.array([b * RATE / N_FFT for b in range(N_FFT // 2 + 1)])
    out = {"centroid": [], "bandwidth": [], "rolloff": [], "flatness": []}
    for frame in frames_of(samples):
        power = dft_magnitude_squared(frame)
        mag = np.sqrt(power)
        total = mag.sum()
        if total > 0:
            centroid = float((mag * freqs).sum() / total)
            bandwidth = float(np.sqrt(((freqs - centroid) ** 2 * mag).sum() / total))
            cumulative = np.cumsum(mag)
            idx = int(np.argmax(cumulative >= 0.85 * cumulative[-1]))
            rolloff = float(freqs[idx])
        else:
            centroid = bandwidth = rolloff = 0.0
        floored = np.maximum(power, LOG_FLOOR)
        flatness = float(np.exp(np.mean(np.log(floored))) / np.mean(floored))
        out["centroid"].append(centroid)
        out["bandwidth"].append(bandwidth)
        out["rolloff"].append(rolloff)
        out["flatness"].append(flatness)
    return {k: np.array(v) for k, v in out.items()}


def delta_loop(matrix: np.ndarray, half_window: int = 2) -> np.ndarray:
    """Regression delta with edge replication, plain loops."""
    k_rows, t_cols = matrix.shape
    denom = 2.0 * sum(j * j for j in range(1, half_window + 1))
    out = np.zeros_like(matrix)
    for r in range(k_rows):
        for t in range(t_cols):
            acc = 0.0
            for j in range(1, half_window + 1):
                right = matrix[r, min(t + j, t_cols - 1)]
                left = matrix[r, max(t - j, 0)]
                acc += j * (right - left)
            out[r, t] = acc / denom
    return out


def percentile_linear(sorted_values: np.ndarray, q: float) -> float:
    """Linear-interpolation percentile over pre-sorted data."""
    n = sorted_values.size
    pos = q / 100.0 * (n - 1)
    lo = int(np.floor(pos))
    hi = int(np.ceil(pos))
    frac = pos - lo
    return float(sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac)


def summarize_ref(values: np.ndarray) -> np.ndarray:
    """Reference eight-statistic summary."""
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(sum(values) / n)
    diffs = values - mean
    m2 = float(sum(diffs**2) / n)
    m3 = float(sum(diffs**3) / n)
    m4 = float(sum(diffs**4) / n)
    skew = m3 / m2**1.5 if m2 > 0 else 0.0
    kurt = m4 / m2**2 - 3.0 if m2 > 0 else 0.0
    s = np.sort(values)
    return np.array([
        mean, np.sqrt(m2), float(s[0]), float(s[-1]),
        percentile_linear(s, 25), percentile_linear(s, 75), skew, kurt,
    ])


def rms_zcr(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rms, zcr = [], []
    for frame in frames_of(samples):
        rms.append(float(np.sqrt(sum(frame**2) / frame.size)))
        crossings = 0
        for a, b in zip(np.sign(frame[:-1]), np.sign(frame[1:])):
            if a != b:
                crossings += 1
        zcr.append(crossings / frame.size)
    return np.array(rms), np.array(zcr)


def feature_vector_ref(samples: np.ndarray) -> np.ndarray:
    """Full 126-dimensional reference vector built from the oracle pieces."""
    base = mfcc_matrix(samples)
    d1 = delta_loop(base)
    d2 = delta_loop(d1)
    parts = []
    for matrix in (base, d1, d2):
        parts.append(matrix.mean(axis=1))
        parts.append(np.sqrt(((matrix - matrix.mean(axis=1, keepdims=True)) ** 2).mean(axis=1)))
    rms, zcr = rms_zcr(samples)
    spectral = spectral_descriptors(samples)
    for series in (rms, zcr, spectral["centroid"], spectral["bandwidth"],
                   spectral["rolloff"], spectral["flatness"]):
        parts.append(summarize_ref(series))
    return np.concatenate(parts)
