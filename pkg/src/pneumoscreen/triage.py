"""Deterministic symptom triage: additive score, risk banding, urgent escalation.

The rule layer works on structured questionnaire answers only.  Four binary
indicators carry fixed weights (cough/difficult breathing 2, fever/chills 1,
mild shortness of breath 2, major risk factor 1), giving a score in 0..6.
A handful of danger signs bypass the score entirely and force URGENT.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from pneumoscreen.errors import InvalidResponse


class ShortnessOfBreath(enum.Enum):
    NONE = "None"
    MILD = "Mild"
    SEVERE = "Severe"


class AgeGroup(enum.Enum):
    UNDER_FIVE = "UnderFive"
    FIVE_AND_OVER = "FiveAndOver"


class RiskBand(enum.IntEnum):
    """Ordinal screening category; LOW < MODERATE < HIGH < URGENT."""

    LOW = 0
    MODERATE = 1
    HIGH = 2
    URGENT = 3


# Stable identifiers for the hard escalation rules, used in reports and the UI.
RULE_SEVERE_SOB = "severe_sob"
RULE_CHEST_PAIN_OR_CONFUSION = "chest_pain_or_confusion"
RULE_CHEST_INDRAWING = "chest_indrawing"
RULE_UNABLE_TO_DRINK_OR_FEED = "unable_to_drink_or_feed"

WEIGHT_COUGH = 2
WEIGHT_FEVER = 1
WEIGHT_MILD_SOB = 2
WEIGHT_RISK_FACTOR = 1
MAX_SCORE = 6

HIGH_THRESHOLD = 5
MODERATE_THRESHOLD = 3


@dataclass(frozen=True)
class SymptomResponse:
    """One patient's structured questionnaire answers.

    The pediatric-only fields (chest_indrawing, unable_to_drink_or_feed) are
    meaningful only for age_group UNDER_FIVE; construction rejects them for
    older patients rather than silently ignoring them.
    """

    cough_or_difficult_breathing: bool = False
    fever_or_chills: bool = False
    shortness_of_breath: ShortnessOfBreath = ShortnessOfBreath.NONE
    chest_pain_or_confusion: bool = False
    major_risk_factor: bool = False
    age_group: AgeGroup = AgeGroup.FIVE_AND_OVER
    chest_indrawing: bool = False
    unable_to_drink_or_feed: bool = False

    def __post_init__(self) -> None:
        if self.age_group is AgeGroup.FIVE_AND_OVER and (
            self.chest_indrawing or self.unable_to_drink_or_feed
        ):
            raise InvalidResponse(
                "chest_indrawing and unable_to_drink_or_feed apply only to "
                "patients under five"
            )

    @classmethod
    def from_dict(cls, payload: dict) -> "SymptomResponse":
        try:
            sob = ShortnessOfBreath(payload.get("shortness_of_breath", "None"))
            age = AgeGroup(payload.get("age_group", "FiveAndOver"))
        except ValueError as exc:
            raise InvalidResponse(str(exc)) from exc
        return cls(
            cough_or_difficult_breathing=bool(
                payload.get("cough_or_difficult_breathing", False)
            ),
            fever_or_chills=bool(payload.get("fever_or_chills", False)),
            shortness_of_breath=sob,
            chest_pain_or_confusion=bool(payload.get("chest_pain_or_confusion", False)),
            major_risk_factor=bool(payload.get("major_risk_factor", False)),
            age_group=age,
            chest_indrawing=bool(payload.get("chest_indrawing", False)),
            unable_to_drink_or_feed=bool(payload.get("unable_to_drink_or_feed", False)),
        )

    def to_dict(self) -> dict:
        return {
            "cough_or_difficult_breathing": self.cough_or_difficult_breathing,
            "fever_or_chills": self.fever_or_chills,
            "shortness_of_breath": self.shortness_of_breath.value,
            "chest_pain_or_confusion": self.chest_pain_or_confusion,
            "major_risk_factor": self.major_risk_factor,
            "age_group": self.age_group.value,
            "chest_indrawing": self.chest_indrawing,
            "unable_to_drink_or_feed": self.unable_to_drink_or_feed,
        }


@dataclass(frozen=True)
class TriageResult:
    score: int
    normalized: float
    band: RiskBand
    urgent_rules_fired: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "normalized": self.normalized,
            "band": self.band.name,
            "urgent_rules_fired": list(self.urgent_rules_fired),
        }


def _escalation_rules(response: SymptomResponse) -> tuple[str, ...]:
    fired = []
    if response.shortness_of_breath is ShortnessOfBreath.SEVERE:
        fired.append(RULE_SEVERE_SOB)
    if response.chest_pain_or_confusion:
        fired.append(RULE_CHEST_PAIN_OR_CONFUSION)
    if response.age_group is AgeGroup.UNDER_FIVE:
        if response.chest_indrawing:
            fired.append(RULE_CHEST_INDRAWING)
        if response.unable_to_drink_or_feed:
            fired.append(RULE_UNABLE_TO_DRINK_OR_FEED)
    return tuple(fired)


def _additive_score(response: SymptomResponse) -> int:
    score = 0
    if response.cough_or_difficult_breathing:
        score += WEIGHT_COUGH
    if response.fever_or_chills:
        score += WEIGHT_FEVER
    if response.shortness_of_breath is ShortnessOfBreath.MILD:
        score += WEIGHT_MILD_SOB
    if response.major_risk_factor:
        score += WEIGHT_RISK_FACTOR
    return score


def band_for_score(score: int) -> RiskBand:
    """Band for a non-escalated score: HIGH >= 5, MODERATE 3..4, LOW <= 2."""
    if score >= HIGH_THRESHOLD:
        return RiskBand.HIGH
    if score >= MODERATE_THRESHOLD:
        return RiskBand.MODERATE
    return RiskBand.LOW


def evaluate_triage(response: SymptomResponse) -> TriageResult:
    """Map questionnaire answers to score, normalized signal, and band.

    Escalation rules force URGENT; the additive score is still computed and
    reported for the audit trail.  Severe shortness of breath contributes 0
    to the additive score (only the mild grade is an indicator).
    """
    fired = _escalation_rules(response)
    score = _additive_score(response)
    normalized = score / MAX_SCORE
    if fired:
        return TriageResult(score, normalized, RiskBand.URGENT, fired)
    return TriageResult(score, normalized, band_for_score(score))
