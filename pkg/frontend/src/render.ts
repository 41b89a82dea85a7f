/** Pure HTML string renderers. Kept DOM-free so contract tests can run
 * in node; the browser shell assigns the output to innerHTML. */

import type { DashboardView } from './dashboard.js';
import type { TriageView } from './questionnaire.js';
import type { BandName } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

// Band is always conveyed as text plus color, never color alone.
export const BAND_COLORS: Record<BandName, string> = {
  LOW: '#2e7d32',
  MODERATE: '#b58900',
  HIGH: '#d1495b',
  URGENT: '#b71c1c',
};

export function renderBandChip(band: BandName): string {
  return (
    `<span class="band-chip band-${band.toLowerCase()}"` +
    ` style="background:${BAND_COLORS[band]}">${band}</span>`
  );
}

export function renderUrgentBanner(rules: string[]): string {
  const detail =
    rules.length > 0
      ? `<div class="urgent-rules">${rules.map(escapeHtml).join('; ')}</div>`
      : '';
  return (
    '<div class="urgent-banner" role="alert">URGENT: seek care now</div>' + detail
  );
}

export function renderTriageResult(view: TriageView): string {
  const parts: string[] = [];
  if (view.banner) {
    parts.push(renderUrgentBanner(view.banner.rules));
  }
  parts.push(
    `<div class="triage-result">Symptom score ${escapeHtml(view.scoreText)} ` +
      renderBandChip(view.band) +
      '</div>'
  );
  return parts.join('\n');
}

export function renderErrors(errors: string[]): string {
  const items = errors.map((e) => `<li>${escapeHtml(e)}</li>`).join('');
  return `<ul class="form-errors">${items}</ul>`;
}

export function renderDashboard(view: DashboardView): string {
  const parts: string[] = [];
  if (view.banner) {
    parts.push(renderUrgentBanner([]));
  }
  parts.push(
    `<div class="fused-score">Fused score ${escapeHtml(view.scoreText)} ` +
      renderBandChip(view.band) +
      ` <span class="config-name">(${escapeHtml(view.configName)})</span></div>`
  );
  const segments = view.segments
    .map((s) => {
      const width = (s.value * 100).toFixed(2);
      const cls = s.missing ? 'bar-segment missing' : 'bar-segment';
      const label = s.missing ? `${s.label} (missing)` : s.label;
      return (
        `<div class="${cls}" title="${escapeHtml(s.tooltip)}"` +
        ` style="width:${width}%;background:${s.color}">` +
        `${escapeHtml(label)}</div>`
      );
    })
    .join('');
  const markers = view.markers
    .map(
      (m) =>
        `<div class="threshold-marker" style="left:${m.value * 100}%"` +
        ` title="${escapeHtml(m.label)}"></div>`
    )
    .join('');
  parts.push(`<div class="contribution-bar">${segments}${markers}</div>`);
  parts.push(
    `<div class="missing-note">Missing modalities: ` +
      `${view.missingLabels.length > 0 ? escapeHtml(view.missingLabels.join(', ')) : 'none'}</div>`
  );
  return parts.join('\n');
}

export function renderReport(report: string): string {
  return `<pre class="report">${escapeHtml(report)}</pre>`;
}
