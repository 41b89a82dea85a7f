"""Synthetic domain perturbations for grayscale radiographs, plus ingestion
of externally produced imaging probabilities.

Images are 1-channel float arrays in [0, 1] at arbitrary resolution.  Domain
codes: 0 Clean, 1 Blur, 2 Noise, 3 Contrast.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

from pneumoscreen.errors import EmptyDataset, OutOfRange, UnsupportedFormat

BLUR_SIGMA = 1.0
BLUR_RADIUS = 2
NOISE_SIGMA = 0.1
CONTRAST_FACTORS = (0.5, 1.5)


class DomainLabel(enum.IntEnum):
    CLEAN = 0
    BLUR = 1
    NOISE = 2
    CONTRAST = 3


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray  # (height, width), float64, values in [0, 1]

    def __post_init__(self) -> None:
        px = self.pixels
        if px.ndim != 2:
            raise ValueError("expected a 2-D pixel array")
        if px.size and (px.min() < 0.0 or px.max() > 1.0):
            raise ValueError("pixel values must lie in [0, 1]")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class ImageSignal:
    probability: float
    source: str = ""

    def to_dict(self) -> dict:
        return {"probability": self.probability, "source": self.source}


def ingest_image_signal(record: dict) -> ImageSignal:
    """Validate an externally produced radiograph probability record."""
    try:
        probability = float(record["probability"])
    except (KeyError, TypeError, ValueError) as exc:
        raise OutOfRange(f"missing or non-numeric probability: {exc}") from exc
    if not (0.0 <= probability <= 1.0):
        raise OutOfRange(f"probability {probability} outside [0, 1]")
    return ImageSignal(probability=probability, source=str(record.get("source", "")))


def gaussian_kernel(sigma: float = BLUR_SIGMA, radius: int = BLUR_RADIUS) -> np.ndarray:
    """1-D Gaussian taps, normalized to sum to 1."""
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _blur(pixels: np.ndarray) -> np.ndarray:
    k = gaussian_kernel()
    r = BLUR_RADIUS
    padded = np.pad(pixels, r, mode="reflect")
    # separable pass: rows then columns
    tmp = np.apply_along_axis(lambda row: np.convolve(row, k, mode="valid"), 1, padded)
    out = np.apply_along_axis(lambda col: np.convolve(col, k, mode="valid"), 0, tmp)
    return np.clip(out, 0.0, 1.0)


def perturb(
    img: GrayImage,
    domain: DomainLabel,
    seed: int = 0,
    contrast_factor: float | None = None,
) -> GrayImage:
    """Apply one synthetic domain transform; Clean is the identity.

    Noise and the contrast-factor draw are seeded, so a fixed seed gives a
    bit-identical output.  contrast_factor, when given, bypasses the draw.
    """
    px = img.pixels
    if domain is DomainLabel.CLEAN:
        return GrayImage(px.copy())
    if domain is DomainLabel.BLUR:
        return GrayImage(_blur(px))
    if domain is DomainLabel.NOISE:
        rng = np.random.default_rng(seed)
        noisy = px + rng.normal(0.0, NOISE_SIGMA, size=px.shape)
        return GrayImage(np.clip(noisy, 0.0, 1.0))
    if domain is DomainLabel.CONTRAST:
        if contrast_factor is None:
            rng = np.random.default_rng(seed)
            contrast_factor = float(rng.choice(CONTRAST_FACTORS))
        out = 0.5 + contrast_factor * (px - 0.5)
        return GrayImage(np.clip(out, 0.0, 1.0))
    raise ValueError(f"unknown domain {domain!r}")


def build_domain_dataset(
    images: list[tuple[GrayImage, int]], seed: int = 0
) -> list[tuple[GrayImage, int, DomainLabel]]:
    """Assign each image a uniform random domain (seeded) and perturb it.

    Per-image randomness is derived as seed XOR index so per-image work can
    be parallelized without changing the result.
    """
    if not images:
        raise EmptyDataset("no images supplied")
    rng = np.random.default_rng(seed)
    domains = rng.integers(0, 4, size=len(images))
    out = []
    for i, (img, label) in enumerate(images):
        d = DomainLabel(int(domains[i]))
        out.append((perturb(img, d, seed=seed ^ i), label, d))
    return out


def resize_bilinear(img: GrayImage, size: int) -> GrayImage:
    """Bilinear resize to size x size (dataset-preparation utility)."""
    pil = Image.fromarray(img.pixels.astype(np.float32), mode="F")
    resized = pil.resize((size, size), Image.BILINEAR)
    return GrayImage(np.clip(np.asarray(resized, dtype=np.float64), 0.0, 1.0))


def read_pgm(data: bytes) -> GrayImage:
    """Read a binary 8-bit PGM (P5)."""
    if not data.startswith(b"P5"):
        raise UnsupportedFormat("expected binary PGM (P5)")
    # header tokens: magic, width, height, maxval; comments start with '#'
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3 and pos < len(data):
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise UnsupportedFormat(f"bad PGM header: {exc}") from exc
    if maxval != 255:
        raise UnsupportedFormat(f"only 8-bit PGM supported, maxval={maxval}")
    raw = data[pos : pos + width * height]
    if len(raw) != width * height:
        raise UnsupportedFormat("truncated PGM pixel data")
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels.astype(np.float64) / 255.0)


def write_pgm(img: GrayImage) -> bytes:
    """Write a binary 8-bit PGM (P5); pixels rounded to nearest level."""
    quantized = np.clip(np.rint(img.pixels * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + quantized.tobytes()


def read_image(data: bytes) -> GrayImage:
    """Read PGM (P5) or 8-bit grayscale PNG."""
    if data.startswith(b"P5"):
        return read_pgm(data)
    if data.startswith(b"\x89PNG"):
        pil = Image.open(io.BytesIO(data))
        if pil.mode != "L":
            pil = pil.convert("L")
        return GrayImage(np.asarray(pil, dtype=np.float64) / 255.0)
    raise UnsupportedFormat("expected PGM (P5) or PNG")
