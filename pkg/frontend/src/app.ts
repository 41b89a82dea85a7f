/** Browser shell: wires the pure view models to the page. All state
 * shown to the operator is reconciled from server responses. */

import { ApiClient, type SignalPayload } from './api.js';
import { DashboardController, dashboardView } from './dashboard.js';
import {
  emptyForm,
  submitQuestionnaire,
  triageView,
  type QuestionnaireForm,
} from './questionnaire.js';
import {
  renderDashboard,
  renderErrors,
  renderReport,
  renderTriageResult,
} from './render.js';
import { isApiError, type EncounterRecord } from './types.js';

const client = new ApiClient('');
const dashboard = new DashboardController(client);

let form: QuestionnaireForm = emptyForm();
let encounterId = crypto.randomUUID().replace(/-/g, '');
let signals: SignalPayload = {};

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function readForm(): void {
  form = {
    coughOrDifficultBreathing: byId<HTMLInputElement>('q-cough').checked,
    feverOrChills: byId<HTMLInputElement>('q-fever').checked,
    shortnessOfBreath: byId<HTMLSelectElement>('q-sob')
      .value as QuestionnaireForm['shortnessOfBreath'],
    chestPainOrConfusion: byId<HTMLInputElement>('q-pain').checked,
    majorRiskFactor: byId<HTMLInputElement>('q-risk').checked,
    ageGroup: byId<HTMLSelectElement>('q-age')
      .value as QuestionnaireForm['ageGroup'],
    chestIndrawing: byId<HTMLInputElement>('q-indraw').checked,
    unableToDrinkOrFeed: byId<HTMLInputElement>('q-feed').checked,
    touched: document.querySelectorAll('#questionnaire :checked').length > 0,
  };
}

async function refreshDashboard(): Promise<void> {
  if (Object.keys(signals).length === 0) {
    return;
  }
  dashboard.setSignals(signals);
  const view = await dashboard.selectPreset(
    byId<HTMLSelectElement>('preset').value || 'Base setting'
  );
  byId('dashboard').innerHTML = renderDashboard(view);
}

async function onTriageSubmit(event: Event): Promise<void> {
  event.preventDefault();
  readForm();
  const outcome = await submitQuestionnaire(client, form, encounterId);
  const target = byId('triage-output');
  if (outcome.kind === 'ok') {
    target.innerHTML = renderTriageResult(triageView(outcome.result));
    signals = { ...signals, sym: outcome.result.normalized };
    if (outcome.result.band === 'URGENT') signals.urgent = true;
    await refreshDashboard();
  } else {
    target.innerHTML = renderErrors(outcome.errors);
  }
}

async function onCoughUpload(): Promise<void> {
  const input = byId<HTMLInputElement>('cough-file');
  const file = input.files?.[0];
  if (!file) return;
  const reply = await client.uploadCough(file, encounterId);
  const body = reply.body as { recording_level?: number };
  if (reply.status === 200 && body.recording_level !== undefined) {
    signals = { ...signals, cgh: body.recording_level };
    await refreshDashboard();
  } else {
    byId('cough-output').innerHTML = renderErrors([
      isApiError(reply.body) ? reply.body.detail : `status ${reply.status}`,
    ]);
  }
}

async function onTranscriptSubmit(): Promise<void> {
  const text = byId<HTMLTextAreaElement>('transcript-text').value;
  const reply = await client.postTranscript(text, encounterId);
  if (reply.status === 200 && !isApiError(reply.body)) {
    signals = { ...signals, sp: reply.body.score };
    await refreshDashboard();
  }
}

async function onImageSignalSubmit(): Promise<void> {
  const probability = Number(byId<HTMLInputElement>('image-prob').value);
  const source = byId<HTMLInputElement>('image-source').value || 'manual';
  const reply = await client.postImageSignal(probability, source, encounterId);
  const target = byId('image-output');
  if (reply.status === 200 && !isApiError(reply.body)) {
    target.textContent = '';
    signals = { ...signals, img: reply.body.probability };
    await refreshDashboard();
  } else {
    target.innerHTML = renderErrors([
      isApiError(reply.body) ? reply.body.detail : `status ${reply.status}`,
    ]);
  }
}

async function onFinalize(): Promise<void> {
  const reply = await client.fuse(signals, encounterId);
  const target = byId('report-output');
  if (reply.status === 200 && !isApiError(reply.body)) {
    const record = reply.body as EncounterRecord;
    byId('dashboard').innerHTML = renderDashboard(dashboardView(record.fusion));
    target.innerHTML = renderReport(record.report);
    encounterId = crypto.randomUUID().replace(/-/g, '');
    signals = {};
  } else {
    target.innerHTML = renderErrors([
      isApiError(reply.body) ? reply.body.detail : `status ${reply.status}`,
    ]);
  }
}

export function bootstrap(): void {
  byId('questionnaire').addEventListener('submit', onTriageSubmit);
  byId('cough-file').addEventListener('change', onCoughUpload);
  byId('transcript-submit').addEventListener('click', onTranscriptSubmit);
  byId('image-submit').addEventListener('click', onImageSignalSubmit);
  byId('preset').addEventListener('change', refreshDashboard);
  byId('finalize').addEventListener('click', onFinalize);
}

if (typeof document !== 'undefined' && document.getElementById('questionnaire')) {
  bootstrap();
}
