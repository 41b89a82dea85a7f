"""Shared exception types for the screening engine."""


class PneumoScreenError(Exception):
    """Base class for all engine errors."""


class InvalidResponse(PneumoScreenError):
    """Questionnaire answers violate a structural constraint."""


class UnsupportedFormat(PneumoScreenError):
    """Audio file uses an encoding the ingester does not accept."""


class CorruptHeader(PneumoScreenError):
    """Audio container is truncated or structurally broken."""


class TooShort(PneumoScreenError):
    """Recording has fewer samples than one complete analysis segment."""


class TooFewFrames(PneumoScreenError):
    """Not enough frames for a derivative computation."""


class SchemaMismatch(PneumoScreenError):
    """Model feature schema does not match the extractor's."""


class MalformedModel(PneumoScreenError):
    """Tree ensemble file is structurally invalid."""


class DimensionMismatch(PneumoScreenError):
    """Feature vector length differs from the model's feature count."""


class EmptyRecording(PneumoScreenError):
    """No segments supplied for recording-level scoring."""


class OutOfRange(PneumoScreenError):
    """A probability or bounded signal lies outside [0, 1]."""


class EmptyDataset(PneumoScreenError):
    """Dataset construction was given no images."""


class EmptyInput(PneumoScreenError):
    """Metric requested over an empty record list."""


class SingleClass(PneumoScreenError):
    """Ranking metric needs at least one positive and one negative."""


class NoSignals(PneumoScreenError):
    """Fusion requested with no modality signal present."""


class InvalidConfig(PneumoScreenError):
    """Fusion configuration violates its invariants."""


class NegativeWeight(PneumoScreenError):
    """A weight shift would drive a modality weight below zero."""
