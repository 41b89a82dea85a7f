import struct
from pathlib import Path

import numpy as np
import pytest

import dsp_oracle as orc
from pneumoscreen.audio.features import (
    FEATURE_DIMENSION,
    FEATURE_NAMES,
    MfccMatrix,
    deltas,
    feature_vector,
    lld_features,
    mfcc,
    mfcc_statistics,
    summarize,
)
from pneumoscreen.audio.pipeline import (
    SEGMENT_SAMPLES,
    Segment,
    preprocess,
    resample,
)
from pneumoscreen.audio.wavio import Waveform, ingest_wav, write_wav_pcm16
from pneumoscreen.errors import CorruptHeader, TooFewFrames, TooShort, UnsupportedFormat

DATA = Path(__file__).parent / "data"


def tone(freq, seconds, rate, amplitude=0.5):
    t = np.arange(int(seconds * rate)) / rate
    return amplitude * np.sin(2 * np.pi * freq * t)


def make_segment(samples, index=0):
    return Segment(samples=np.asarray(samples, dtype=float), index=index)


def golden_segment():
    rng = np.random.default_rng(20240817)
    raw = rng.standard_normal(32000)
    return make_segment(raw * (0.95 / np.max(np.abs(raw))))


# --- WAV ingestion -----------------------------------------------------------

def pcm16_wav(samples, rate=16000, channels=1):
    pcm = np.asarray(samples, dtype="<i2").tobytes()
    fmt = struct.pack("<HHIIHH", 1, channels, rate, rate * 2 * channels,
                      2 * channels, 16)
    body = (b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
            + b"data" + struct.pack("<I", len(pcm)) + pcm)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def test_ingest_pcm16_scaling():
    wav = pcm16_wav([16384, -16384])
    w = ingest_wav(wav)
    assert np.allclose(w.samples, [0.5, -0.5])
    assert w.sample_rate == 16000


def test_ingest_stereo_averages():
    data = np.empty(4, dtype="<i2")
    data[0::2] = 32767  # left ~1.0
    data[1::2] = 0      # right 0.0
    wav = pcm16_wav(data, channels=2)
    w = ingest_wav(wav)
    assert np.allclose(w.samples, [32767 / 32768 / 2] * 2)


def test_ingest_float32():
    payload = np.array([0.25, -0.75], dtype="<f4").tobytes()
    fmt = struct.pack("<HHIIHH", 3, 1, 8000, 32000, 4, 32)
    body = (b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
            + b"data" + struct.pack("<I", len(payload)) + payload)
    wav = b"RIFF" + struct.pack("<I", len(body)) + body
    w = ingest_wav(wav)
    assert np.allclose(w.samples, [0.25, -0.75])
    assert w.sample_rate == 8000


def test_truncated_header_raises():
    with pytest.raises(CorruptHeader):
        ingest_wav(b"RIFF\x00\x00")
    with pytest.raises(CorruptHeader):
        ingest_wav(b"not audio at all")


def test_unsupported_bit_depth():
    fmt = struct.pack("<HHIIHH", 1, 1, 16000, 16000, 1, 8)  # 8-bit PCM
    body = (b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
            + b"data" + struct.pack("<I", 2) + b"\x00\x00")
    with pytest.raises(UnsupportedFormat):
        ingest_wav(b"RIFF" + struct.pack("<I", len(body)) + body)


def test_wav_writer_round_trip():
    samples = tone(440, 0.1, 16000)
    w = ingest_wav(write_wav_pcm16(samples, 16000))
    assert w.sample_rate == 16000
    assert np.max(np.abs(w.samples - samples)) < 1e-4


# --- preprocessing -----------------------------------------------------------

def test_five_seconds_gives_two_segments():
    w = Waveform(samples=tone(300, 5.0, 16000), sample_rate=16000)
    segments = preprocess(w)
    assert [s.index for s in segments] == [0, 1]


def test_too_short_raises():
    w = Waveform(samples=tone(300, 1.9, 16000), sample_rate=16000)
    with pytest.raises(TooShort):
        preprocess(w)


def test_peak_normalization():
    w = Waveform(samples=tone(300, 2.0, 16000, amplitude=0.2), sample_rate=16000)
    (seg,) = preprocess(w)
    assert np.isclose(np.max(np.abs(seg.samples)), 0.95)


def test_all_zero_segment_stays_zero():
    w = Waveform(samples=np.zeros(SEGMENT_SAMPLES), sample_rate=16000)
    (seg,) = preprocess(w)
    assert np.all(seg.samples == 0.0)


def test_resampled_tone_keeps_dominant_bin():
    w = Waveform(samples=tone(100, 4.0, 8000), sample_rate=8000)
    segments = preprocess(w)
    assert len(segments) == 2
    for seg in segments:
        spectrum = np.abs(np.fft.rfft(seg.samples))
        dominant = np.argmax(spectrum) * 16000 / seg.samples.size
        assert abs(dominant - 100.0) <= 16000 / seg.samples.size


def test_amplitude_scale_invariance():
    base = tone(500, 2.0, 16000, amplitude=0.3)
    a = preprocess(Waveform(samples=base, sample_rate=16000))[0]
    # power-of-two scales commute with float rounding: bit-exact
    for c in (0.125, 2.0, 8.0):
        b = preprocess(Waveform(samples=c * base, sample_rate=16000))[0]
        assert np.array_equal(a.samples, b.samples)
        assert np.array_equal(
            feature_vector(a).values, feature_vector(b).values
        )
    # arbitrary scales agree to rounding noise (well-conditioned signal)
    rng = np.random.default_rng(6)
    noisy = base + 0.05 * rng.standard_normal(base.size)
    a = preprocess(Waveform(samples=noisy, sample_rate=16000))[0]
    for c in (0.1, 0.7, 10.0):
        b = preprocess(Waveform(samples=c * noisy, sample_rate=16000))[0]
        assert np.max(np.abs(a.samples - b.samples)) < 1e-14
        assert np.allclose(
            feature_vector(a).values, feature_vector(b).values,
            rtol=1e-7, atol=1e-9,
        )


# --- MFCC --------------------------------------------------------------------

def test_mfcc_all_zero_segment_constant_frames():
    seg = make_segment(np.zeros(SEGMENT_SAMPLES))
    m = mfcc(seg).values
    assert np.allclose(m, m[:, :1])  # every frame identical
    # constant equals orthonormal DCT of the all-log-floor mel vector
    expected = orc.dct2_ortho(np.full(26, np.log(1e-10)), 13)
    assert np.allclose(m[:, 0], expected)


def test_mfcc_stationary_tone_low_variance():
    seg = make_segment(tone(1000, 2.0, 16000, amplitude=0.95))
    m = mfcc(seg).values
    assert np.all(np.var(m, axis=1) < 1e-3)


def test_mfcc_matches_golden():
    golden = np.loadtxt(DATA / "golden_mfcc_seed20240817.csv", delimiter=",")
    got = mfcc(golden_segment()).values
    assert got.shape == golden.shape == (13, 198)
    assert np.max(np.abs(got - golden)) < 1e-6


def test_mfcc_statistics_hand_cases():
    mu, sigma = mfcc_statistics(MfccMatrix(values=np.array([[1.0, 1.0, 1.0]])))
    assert mu[0] == 1.0 and sigma[0] == 0.0
    mu, sigma = mfcc_statistics(MfccMatrix(values=np.array([[0.0, 2.0]])))
    assert mu[0] == 1.0 and sigma[0] == 1.0  # population variance
    mu, sigma = mfcc_statistics(MfccMatrix(values=np.array([[4.0]])))
    assert sigma[0] == 0.0


# --- deltas ------------------------------------------------------------------

def test_delta_of_constant_is_zero():
    m = MfccMatrix(values=np.full((3, 10), 2.5))
    assert np.allclose(deltas(m).values, 0.0)


def test_delta_of_ramp_is_one_interior():
    m = MfccMatrix(values=np.arange(5.0)[None, :])
    d = deltas(m).values
    assert np.allclose(d[0, 2], 1.0)  # interior frame
    d2 = deltas(m, order=2).values
    assert np.allclose(d2[0, 2], 0.0)


def test_delta_too_few_frames():
    with pytest.raises(TooFewFrames):
        deltas(MfccMatrix(values=np.ones((2, 2))))


def test_delta_matches_loop_oracle():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((5, 30))
    assert np.allclose(
        deltas(MfccMatrix(values=m)).values, orc.delta_loop(m), atol=1e-12
    )


# --- LLDs and statistics -----------------------------------------------------

def test_lld_silence_conventions():
    seg = make_segment(np.zeros(SEGMENT_SAMPLES))
    llds = lld_features(seg)
    assert np.all(llds["rms"] == 0.0)
    assert np.all(llds["zcr"] == 0.0)
    assert np.allclose(llds["flatness"], 1.0)
    assert np.all(llds["centroid"] == 0.0)


def test_zcr_alternating_maximal():
    samples = np.tile([0.5, -0.5], SEGMENT_SAMPLES // 2)
    llds = lld_features(make_segment(samples))
    assert np.allclose(llds["zcr"], 399 / 400)


def test_centroid_of_pure_tone():
    seg = make_segment(tone(1000, 2.0, 16000, amplitude=0.95))
    llds = lld_features(seg)
    bin_width = 16000 / 512
    assert np.all(np.abs(llds["centroid"] - 1000.0) <= bin_width)


def test_summarize_hand_cases():
    constant = summarize(np.array([3.0, 3.0, 3.0]))
    assert np.allclose(constant, [3, 0, 3, 3, 3, 3, 0, 0])
    stats = summarize(np.array([1.0, 2.0, 3.0, 4.0]))
    assert np.allclose(
        stats[:6], [2.5, np.sqrt(1.25), 1.0, 4.0, 1.75, 3.25]
    )
    assert summarize(np.array([-1.0, 0.0, 1.0]))[6] == 0.0  # symmetric -> skew 0


# --- full vector -------------------------------------------------------------

def test_feature_vector_shape_and_names():
    rng = np.random.default_rng(2)
    seg = make_segment(rng.uniform(-0.95, 0.95, SEGMENT_SAMPLES))
    vec = feature_vector(seg)
    assert vec.values.shape == (FEATURE_DIMENSION,)
    assert np.all(np.isfinite(vec.values))
    assert len(set(FEATURE_NAMES)) == FEATURE_DIMENSION
    assert vec.names == FEATURE_NAMES


def test_feature_vector_matches_golden():
    golden = np.loadtxt(
        DATA / "golden_features_seed20240817.csv", delimiter=",", skiprows=1
    )
    got = feature_vector(golden_segment()).values
    # 1e-6 absolute, widened by the 9-significant-digit storage quantum
    # for large Hz-valued features
    tol = np.maximum(1e-6, 1e-8 * np.abs(golden))
    assert np.all(np.abs(got - golden) < tol)


def test_feature_vector_deterministic():
    seg = golden_segment()
    a = feature_vector(seg).values
    b = feature_vector(seg).values
    assert np.array_equal(a, b)


def test_all_zero_segment_vector_is_finite_constant():
    seg = make_segment(np.zeros(SEGMENT_SAMPLES))
    a = feature_vector(seg).values
    assert np.all(np.isfinite(a))
    assert np.array_equal(a, feature_vector(seg).values)


@pytest.mark.parametrize("seed", range(3))
def test_oracle_equivalence_random_segments(seed):
    rng = np.random.default_rng(seed)
    seg = make_segment(rng.uniform(-0.95, 0.95, SEGMENT_SAMPLES))
    got = feature_vector(seg).values
    ref = orc.feature_vector_ref(seg.samples)
    rel = np.abs(got - ref) / (np.abs(ref) + 1e-12)
    assert np.max(rel) < 1e-6
