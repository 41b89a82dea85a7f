"""Offline multimodal pneumonia-screening engine.

Four evidence channels (structured symptoms, cough audio, transcript text,
externally supplied radiograph probabilities) are converted into bounded
concern signals and fused by an interpretable weighted operator with risk
banding, sensitivity analysis, and deterministic report generation.
"""

from pneumoscreen.triage import (
    AgeGroup,
    RiskBand,
    ShortnessOfBreath,
    SymptomResponse,
    TriageResult,
    evaluate_triage,
)
from pneumoscreen.fusion import FusionConfig, FusionResult, ModalitySignals, fuse

__all__ = [
    "AgeGroup",
    "RiskBand",
    "ShortnessOfBreath",
    "SymptomResponse",
    "TriageResult",
    "evaluate_triage",
    "FusionConfig",
    "FusionResult",
    "ModalitySignals",
    "fuse",
]

__version__ = "0.1.0"
