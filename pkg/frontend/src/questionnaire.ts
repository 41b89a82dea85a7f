/** Questionnaire flow: local validation, submission, and the view model
 * for the returned triage result. The band and score shown always come
 * from the server response. */

import type { ApiClient } from './api.js';
import { isApiError, type TriageResult } from './types.js';

export type SobGrade = 'None' | 'Mild' | 'Severe';
export type AgeGroup = 'UnderFive' | 'FiveAndOver';

export interface QuestionnaireForm {
  coughOrDifficultBreathing: boolean;
  feverOrChills: boolean;
  shortnessOfBreath: SobGrade;
  chestPainOrConfusion: boolean;
  majorRiskFactor: boolean;
  ageGroup: AgeGroup;
  chestIndrawing: boolean;
  unableToDrinkOrFeed: boolean;
  /** Set once the operator has answered anything at all. */
  touched: boolean;
}

export function emptyForm(): QuestionnaireForm {
  return {
    coughOrDifficultBreathing: false,
    feverOrChills: false,
    shortnessOfBreath: 'None',
    chestPainOrConfusion: false,
    majorRiskFactor: false,
    ageGroup: 'FiveAndOver',
    chestIndrawing: false,
    unableToDrinkOrFeed: false,
    touched: false,
  };
}

export function validateForm(form: QuestionnaireForm): string[] {
  const errors: string[] = [];
  if (!form.touched) {
    errors.push('Answer the questionnaire before submitting.');
  }
  if (
    form.ageGroup === 'FiveAndOver' &&
    (form.chestIndrawing || form.unableToDrinkOrFeed)
  ) {
    errors.push('Chest indrawing and feeding questions apply only to under-fives.');
  }
  return errors;
}

export function toPayload(form: QuestionnaireForm): Record<string, unknown> {
  return {
    cough_or_difficult_breathing: form.coughOrDifficultBreathing,
    fever_or_chills: form.feverOrChills,
    shortness_of_breath: form.shortnessOfBreath,
    chest_pain_or_confusion: form.chestPainOrConfusion,
    major_risk_factor: form.majorRiskFactor,
    age_group: form.ageGroup,
    chest_indrawing: form.chestIndrawing,
    unable_to_drink_or_feed: form.unableToDrinkOrFeed,
  };
}

export type SubmitOutcome =
  | { kind: 'invalid'; errors: string[] }
  | { kind: 'rejected'; errors: string[] }
  | { kind: 'ok'; result: TriageResult };

/** Validates locally first; an invalid form never reaches the network. */
export async function submitQuestionnaire(
  client: ApiClient,
  form: QuestionnaireForm,
  encounter?: string
): Promise<SubmitOutcome> {
  const errors = validateForm(form);
  if (errors.length > 0) {
    return { kind: 'invalid', errors };
  }
  const reply = await client.postTriage(toPayload(form), encounter);
  if (reply.status !== 200 || isApiError(reply.body)) {
    const detail = isApiError(reply.body)
      ? reply.body.detail
      : `unexpected status ${reply.status}`;
    return { kind: 'rejected', errors: [detail] };
  }
  return { kind: 'ok', result: reply.body };
}

const RULE_LABELS: Record<string, string> = {
  severe_sob: 'Severe shortness of breath',
  chest_pain_or_confusion: 'Chest pain or confusion',
  chest_indrawing: 'Chest indrawing',
  unable_to_drink_or_feed: 'Unable to drink or feed',
};

export function ruleLabel(rule: string): string {
  return RULE_LABELS[rule] ?? rule;
}

export interface TriageView {
  /** Non-null iff the server escalated; rendered before everything else. */
  banner: { rules: string[] } | null;
  band: TriageResult['band'];
  scoreText: string;
}

export function triageView(result: TriageResult): TriageView {
  return {
    banner:
      result.band === 'URGENT'
        ? { rules: result.urgent_rules_fired.map(ruleLabel) }
        : null,
    band: result.band,
    scoreText: `${result.score}/6`,
  };
}
