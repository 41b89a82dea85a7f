import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pneumoscreen.errors import InvalidResponse
from pneumoscreen.triage import (
    AgeGroup,
    RiskBand,
    ShortnessOfBreath,
    SymptomResponse,
    evaluate_triage,
)


def oracle_score(cough, fever, sob, risk):
    """Independent enumeration oracle for the additive score."""
    return 2 * cough + 1 * fever + 2 * (sob is ShortnessOfBreath.MILD) + 1 * risk


def oracle_band(score):
    if score >= 5:
        return RiskBand.HIGH
    if score >= 3:
        return RiskBand.MODERATE
    return RiskBand.LOW


def all_responses():
    for cough, fever, risk, pain in itertools.product([False, True], repeat=4):
        for sob in ShortnessOfBreath:
            for age in AgeGroup:
                ped_options = (
                    itertools.product([False, True], repeat=2)
                    if age is AgeGroup.UNDER_FIVE
                    else [(False, False)]
                )
                for indraw, nofeed in ped_options:
                    yield SymptomResponse(
                        cough_or_difficult_breathing=cough,
                        fever_or_chills=fever,
                        shortness_of_breath=sob,
                        chest_pain_or_confusion=pain,
                        major_risk_factor=risk,
                        age_group=age,
                        chest_indrawing=indraw,
                        unable_to_drink_or_feed=nofeed,
                    )


def test_exhaustive_against_oracle():
    for r in all_responses():
        result = evaluate_triage(r)
        expected_score = oracle_score(
            r.cough_or_difficult_breathing, r.fever_or_chills,
            r.shortness_of_breath, r.major_risk_factor,
        )
        assert result.score == expected_score
        assert result.normalized == expected_score / 6
        escalated = (
            r.shortness_of_breath is ShortnessOfBreath.SEVERE
            or r.chest_pain_or_confusion
            or (r.age_group is AgeGroup.UNDER_FIVE
                and (r.chest_indrawing or r.unable_to_drink_or_feed))
        )
        if escalated:
            assert result.band is RiskBand.URGENT
            assert result.urgent_rules_fired
        else:
            assert result.band is oracle_band(expected_score)
            assert result.urgent_rules_fired == ()


def test_all_indicators_mild_sob_scores_six_high():
    r = SymptomResponse(
        cough_or_difficult_breathing=True,
        fever_or_chills=True,
        shortness_of_breath=ShortnessOfBreath.MILD,
        major_risk_factor=True,
    )
    result = evaluate_triage(r)
    assert result.score == 6
    assert result.band is RiskBand.HIGH
    assert result.normalized == 1.0


def test_all_false_scores_zero_low():
    result = evaluate_triage(SymptomResponse())
    assert result.score == 0
    assert result.band is RiskBand.LOW
    assert result.normalized == 0.0


def test_severe_sob_forces_urgent():
    result = evaluate_triage(
        SymptomResponse(shortness_of_breath=ShortnessOfBreath.SEVERE)
    )
    assert result.band is RiskBand.URGENT
    assert result.urgent_rules_fired == ("severe_sob",)


def test_cough_plus_fever_is_moderate():
    result = evaluate_triage(
        SymptomResponse(cough_or_difficult_breathing=True, fever_or_chills=True)
    )
    assert result.score == 3
    assert result.band is RiskBand.MODERATE


def test_pediatric_fields_rejected_for_adults():
    with pytest.raises(InvalidResponse):
        SymptomResponse(age_group=AgeGroup.FIVE_AND_OVER, chest_indrawing=True)
    with pytest.raises(InvalidResponse):
        SymptomResponse(
            age_group=AgeGroup.FIVE_AND_OVER, unable_to_drink_or_feed=True
        )


def test_band_order():
    assert RiskBand.LOW < RiskBand.MODERATE < RiskBand.HIGH < RiskBand.URGENT


@given(
    cough=st.booleans(), fever=st.booleans(), risk=st.booleans(),
    sob=st.sampled_from(list(ShortnessOfBreath)),
)
def test_monotonicity_single_indicator_flip(cough, fever, risk, sob):
    base = evaluate_triage(SymptomResponse(
        cough_or_difficult_breathing=cough, fever_or_chills=fever,
        shortness_of_breath=sob, major_risk_factor=risk,
    ))
    for flipped in (
        SymptomResponse(True, fever, sob, False, risk),
        SymptomResponse(cough, True, sob, False, risk),
        SymptomResponse(cough, fever, sob, False, True),
    ):
        assert evaluate_triage(flipped).score >= base.score


def test_json_round_trip():
    r = SymptomResponse(
        cough_or_difficult_breathing=True,
        age_group=AgeGroup.UNDER_FIVE,
        chest_indrawing=True,
    )
    assert SymptomResponse.from_dict(r.to_dict()) == r
    result = evaluate_triage(r)
    d = result.to_dict()
    assert d["band"] == "URGENT"
    assert d["urgent_rules_fired"] == ["chest_indrawing"]


def test_determinism():
    r = SymptomResponse(fever_or_chills=True)
    assert evaluate_triage(r) == evaluate_triage(r)
