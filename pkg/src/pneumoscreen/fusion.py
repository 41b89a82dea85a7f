"""Weighted late fusion of modality signals, banding, sensitivity, reporting.

The fused score is a convex combination of whichever bounded signals are
present; absent modalities have their weight renormalized away rather than
counted as zero evidence.  An urgent triage escalation overrides the band
but never alters the score itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from pneumoscreen.errors import InvalidConfig, NegativeWeight, NoSignals
from pneumoscreen.triage import RiskBand

MODALITIES = ("img", "sym", "cgh", "sp")

MODALITY_LABELS = {
    "img": "imaging",
    "sym": "symptoms",
    "cgh": "cough",
    "sp": "speech",
}

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ModalitySignals:
    img: Optional[float] = None
    sym: Optional[float] = None
    cgh: Optional[float] = None
    sp: Optional[float] = None
    urgent: bool = False

    def __post_init__(self) -> None:
        for name in MODALITIES:
            value = getattr(self, name)
            if value is not None and not (0.0 <= value <= 1.0):
                raise InvalidConfig(f"signal {name!r} = {value} outside [0, 1]")

    def present(self) -> list[str]:
        return [m for m in MODALITIES if getattr(self, m) is not None]

    def missing(self) -> list[str]:
        return [m for m in MODALITIES if getattr(self, m) is None]

    def to_dict(self) -> dict:
        d = {m: getattr(self, m) for m in MODALITIES}
        d["urgent"] = self.urgent
        return d

    @classmethod
    def from_dict(cls, payload: dict) -> "ModalitySignals":
        return cls(
            img=payload.get("img"),
            sym=payload.get("sym"),
            cgh=payload.get("cgh"),
            sp=payload.get("sp"),
            urgent=bool(payload.get("urgent", False)),
        )


@dataclass(frozen=True)
class FusionConfig:
    weights: dict[str, float]
    high: float = 0.75
    moderate: float = 0.50
    name: str = "Base setting"

    def __post_init__(self) -> None:
        if set(self.weights) != set(MODALITIES):
            raise InvalidConfig(f"weights must cover exactly {MODALITIES}")
        if any(w < 0 for w in self.weights.values()):
            raise InvalidConfig("weights must be non-negative")
        total = sum(self.weights.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidConfig(f"weights sum to {total}, expected 1")
        if not (0.0 < self.moderate < self.high <= 1.0):
            raise InvalidConfig("need 0 < moderate < high <= 1")

    @classmethod
    def default(cls) -> "FusionConfig":
        return cls(weights={"img": 0.40, "sym": 0.20, "cgh": 0.20, "sp": 0.20})

    @classmethod
    def from_dict(cls, payload: dict) -> "FusionConfig":
        thresholds = payload.get("thresholds", {})
        return cls(
            weights={m: float(payload["weights"][m]) for m in MODALITIES},
            high=float(thresholds.get("high", 0.75)),
            moderate=float(thresholds.get("moderate", 0.50)),
            name=payload.get("name", "custom"),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "weights": dict(self.weights),
            "thresholds": {"high": self.high, "moderate": self.moderate},
        }


def preset_configs() -> list[FusionConfig]:
    """The five representative weight configurations (img/sym/cgh/sp)."""
    rows = [
        ("Base setting", 0.40, 0.20, 0.20, 0.20),
        ("Image-dominant", 0.55, 0.15, 0.15, 0.15),
        ("Cough-downweighted", 0.45, 0.25, 0.10, 0.20),
        ("Symptom-dominant", 0.30, 0.35, 0.15, 0.20),
        ("Balanced non-image", 0.25, 0.25, 0.25, 0.25),
    ]
    return [
        FusionConfig(
            weights={"img": img, "sym": sym, "cgh": cgh, "sp": sp}, name=name
        )
        for name, img, sym, cgh, sp in rows
    ]


@dataclass(frozen=True)
class FusionResult:
    score: float
    band: RiskBand
    contributions: dict[str, float]
    missing: tuple[str, ...]
    effective_weights: dict[str, float]
    urgent: bool = False
    config_name: str = "Base setting"

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "band": self.band.name,
            "contributions": dict(self.contributions),
            "missing": list(self.missing),
            "effective_weights": dict(self.effective_weights),
            "urgent": self.urgent,
            "config_name": self.config_name,
        }


def _band(score: float, cfg: FusionConfig) -> RiskBand:
    if score >= cfg.high:
        return RiskBand.HIGH
    if score >= cfg.moderate:
        return RiskBand.MODERATE
    return RiskBand.LOW


def fuse(signals: ModalitySignals, cfg: FusionConfig | None = None) -> FusionResult:
    """Fuse whichever signals are present into a score and risk band.

    Weights of absent modalities are renormalized over the present ones; the
    renormalized weights are recorded for auditability.  The urgent flag
    overrides the band (score still reported).
    """
    if cfg is None:
        cfg = FusionConfig.default()
    present = signals.present()
    if not present:
        raise NoSignals("at least one modality signal is required")
    weight_present = sum(cfg.weights[m] for m in present)
    if weight_present <= 0:
        raise InvalidConfig("present modalities carry zero total weight")
    effective = {m: cfg.weights[m] / weight_present for m in present}
    contributions = {m: effective[m] * getattr(signals, m) for m in present}
    score = math.fsum(contributions.values())
    band = RiskBand.URGENT if signals.urgent else _band(score, cfg)
    return FusionResult(
        score=score,
        band=band,
        contributions=contributions,
        missing=tuple(signals.missing()),
        effective_weights=effective,
        urgent=signals.urgent,
        config_name=cfg.name,
    )


@dataclass(frozen=True)
class SensitivityResult:
    delta_score: float
    band_changed: bool
    band_before: RiskBand
    band_after: RiskBand

    def to_dict(self) -> dict:
        return {
            "delta_score": self.delta_score,
            "band_changed": self.band_changed,
            "band_before": self.band_before.name,
            "band_after": self.band_after.name,
        }


def sensitivity(
    signals: ModalitySignals,
    cfg: FusionConfig,
    delta: float,
    from_modality: str,
    to_modality: str,
) -> SensitivityResult:
    """Shift weight `delta` from one present modality to another.

    The score change is delta * (s_to - s_from), bounded by delta in
    magnitude.  Operates on the effective (renormalized) weights so the
    shifted configuration still sums to 1 over present modalities.
    """
    base = fuse(signals, cfg)
    for m in (from_modality, to_modality):
        if m not in base.effective_weights:
            raise NoSignals(f"modality {m!r} not present in signals")
    if delta < 0:
        raise InvalidConfig("delta must be non-negative")
    if delta > base.effective_weights[from_modality] + 1e-12:
        raise NegativeWeight(
            f"shift {delta} exceeds weight {base.effective_weights[from_modality]}"
            f" of {from_modality!r}"
        )
    s_from = getattr(signals, from_modality)
    s_to = getattr(signals, to_modality)
    delta_score = delta * (s_to - s_from)
    assert abs(delta_score) <= delta + 1e-12
    shifted_score = base.score + delta_score
    band_after = RiskBand.URGENT if signals.urgent else _band(shifted_score, cfg)
    return SensitivityResult(
        delta_score=delta_score,
        band_changed=band_after is not base.band,
        band_before=base.band,
        band_after=band_after,
    )


def sweep_configs(
    signals: ModalitySignals, configs: list[FusionConfig] | None = None
) -> list[FusionResult]:
    """Fuse the same signals under each configuration (defaults to presets)."""
    if configs is None:
        configs = preset_configs()
    return [fuse(signals, cfg) for cfg in configs]


DISCLAIMER = (
    "This is a screening research prototype output, not a diagnosis. "
    "All results require review by qualified clinical personnel."
)


def render_report(
    fusion: FusionResult,
    triage=None,
    cough=None,
    speech=None,
    image=None,
) -> str:
    """Render the deterministic narrative report.

    Fixed template: urgent banner (when applicable), per-modality evidence
    with provenance, explicit missing-modality list, fused score and band,
    and a non-diagnostic disclaimer.  Contains nothing not present in the
    inputs; identical inputs yield byte-identical text.
    """
    lines: list[str] = []
    if fusion.band is RiskBand.URGENT:
        lines.append("*** URGENT ***")
        if triage is not None and triage.urgent_rules_fired:
            lines.append(
                "Escalation rules fired: " + ", ".join(triage.urgent_rules_fired)
            )
        lines.append("")
    lines.append("Screening summary")
    lines.append("=================")
    lines.append("")
    lines.append("Evidence by modality:")
    if triage is not None:
        lines.append(
            f"- symptoms: score {triage.score}/6, normalized "
            f"{triage.normalized:.4f}, triage band {triage.band.name}"
        )
    if cough is not None:
        per_seg = ", ".join(f"{p:.4f}" for p in cough.per_segment)
        lines.append(
            f"- cough: recording-level signal {cough.recording_level:.4f} "
            f"(per-segment: {per_seg})"
        )
    if speech is not None:
        cats = ", ".join(sorted(speech.matched)) if speech.matched else "none"
        lines.append(
            f"- speech: signal {speech.score:.4f} (matched categories: {cats})"
        )
    if image is not None:
        lines.append(
            f"- imaging: probability {image.probability:.4f} "
            f"(source: {image.source})"
        )
    if fusion.missing:
        missing_labels = ", ".join(MODALITY_LABELS[m] for m in fusion.missing)
        lines.append(f"Missing modalities: {missing_labels}")
    else:
        lines.append("Missing modalities: none")
    lines.append("")
    lines.append(f"Fused score: {fusion.score:.6f}")
    lines.append(f"Risk band: {fusion.band.name}")
    contrib = ", ".join(
        f"{MODALITY_LABELS[m]} {v:.4f}" for m, v in fusion.contributions.items()
    )
    lines.append(f"Contributions: {contrib}")
    lines.append("")
    lines.append(DISCLAIMER)
    return "\n".join(lines) + "\n"
