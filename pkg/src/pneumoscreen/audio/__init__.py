from pneumoscreen.audio.wavio import Waveform, ingest_wav
from pneumoscreen.audio.pipeline import Segment, preprocess
from pneumoscreen.audio.features import (
    AcousticFeatureVector,
    FEATURE_NAMES,
    feature_vector,
)

__all__ = [
    "Waveform",
    "ingest_wav",
    "Segment",
    "preprocess",
    "AcousticFeatureVector",
    "FEATURE_NAMES",
    "feature_vector",
]
