"""Minimal RIFF/WAVE reader and writer.

Accepts PCM 16-bit and IEEE float-32, mono or stereo.  Stereo is averaged
to mono; integer samples are scaled to [-1, 1] by 1/32768.  A hand-rolled
parser keeps the error taxonomy precise (corrupt container vs unsupported
encoding) without an audio dependency.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from pneumoscreen.errors import CorruptHeader, UnsupportedFormat

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray  # mono float64
    sample_rate: int

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise CorruptHeader(f"bad sample rate {self.sample_rate}")
        if self.samples.size == 0:
            raise CorruptHeader("no audio samples")

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


def ingest_wav(data: bytes) -> Waveform:
    """Parse WAV bytes into a mono waveform."""
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeader("not a RIFF/WAVE file")
    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise CorruptHeader("fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise CorruptHeader("data chunk truncated")
            payload = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned
    if fmt is None or payload is None:
        raise CorruptHeader("missing fmt or data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if channels not in (1, 2):
        raise UnsupportedFormat(f"{channels} channels unsupported")
    if audio_format == _FORMAT_PCM and bits == 16:
        raw = np.frombuffer(payload[: len(payload) // 2 * 2], dtype="<i2")
        samples = raw.astype(np.float64) / 32768.0
    elif audio_format == _FORMAT_IEEE_FLOAT and bits == 32:
        raw = np.frombuffer(payload[: len(payload) // 4 * 4], dtype="<f4")
        samples = raw.astype(np.float64)
    else:
        raise UnsupportedFormat(
            f"format {audio_format} / {bits}-bit unsupported "
            "(need PCM-16 or float-32)"
        )
    if channels == 2:
        samples = samples[: samples.size // 2 * 2].reshape(-1, 2).mean(axis=1)
    return Waveform(samples=samples, sample_rate=sample_rate)


def write_wav_pcm16(samples: np.ndarray, sample_rate: int) -> bytes:
    """Serialize mono float samples in [-1, 1] as a PCM-16 WAV."""
    pcm = np.clip(np.rint(samples * 32767.0), -32768, 32767).astype("<i2")
    payload = pcm.tobytes()
    fmt = struct.pack(
        "<HHIIHH", _FORMAT_PCM, 1, sample_rate, sample_rate * 2, 2, 16
    )
    chunks = (
        b"WAVE"
        + b"fmt " + struct.pack("<I", len(fmt)) + fmt
        + b"data" + struct.pack("<I", len(payload)) + payload
    )
    return b"RIFF" + struct.pack("<I", len(chunks)) + chunks
