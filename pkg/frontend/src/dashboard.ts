/** Fusion dashboard view model: stacked contribution bars, threshold
 * markers, missing-modality slots, and the preset what-if sweep.
 *
 * No fusion arithmetic happens here. Bar widths are the server's
 * contribution values, the headline score is the server's score, and
 * every preset switch is a fresh server round trip. */

import type { ApiClient, SignalPayload } from './api.js';
import {
  MODALITIES,
  MODALITY_LABELS,
  isApiError,
  type BandName,
  type FusionResult,
  type Modality,
} from './types.js';

export const MODALITY_COLORS: Record<Modality, string> = {
  img: '#4e79a7',
  sym: '#f28e2b',
  cgh: '#59a14f',
  sp: '#b07aa1',
};

export const MISSING_COLOR = '#c8c8c8';

export const THRESHOLD_MARKERS = [
  { value: 0.5, label: 'MODERATE ≥ 0.50' },
  { value: 0.75, label: 'HIGH ≥ 0.75' },
] as const;

export interface BarSegment {
  modality: Modality;
  label: string;
  /** Server contribution (effective weight times signal); 0 when missing. */
  value: number;
  color: string;
  missing: boolean;
  tooltip: string;
}

export interface DashboardView {
  /** Non-null iff the server band is URGENT; always rendered first. */
  banner: boolean;
  band: BandName;
  scoreText: string;
  configName: string;
  segments: BarSegment[];
  markers: typeof THRESHOLD_MARKERS;
  missingLabels: string[];
}

function formatScore(score: number): string {
  return score.toFixed(4);
}

export function dashboardView(fusion: FusionResult): DashboardView {
  const segments: BarSegment[] = MODALITIES.map((m) => {
    const contribution = fusion.contributions[m];
    if (contribution === undefined) {
      return {
        modality: m,
        label: MODALITY_LABELS[m],
        value: 0,
        color: MISSING_COLOR,
        missing: true,
        tooltip: `${MODALITY_LABELS[m]}: missing (weight renormalized away)`,
      };
    }
    const weight = fusion.effective_weights[m];
    return {
      modality: m,
      label: MODALITY_LABELS[m],
      value: contribution,
      color: MODALITY_COLORS[m],
      missing: false,
      tooltip:
        `${MODALITY_LABELS[m]}: contribution ${formatScore(contribution)}` +
        (weight !== undefined
          ? `, effective weight ${formatScore(weight)}`
          : ''),
    };
  });
  return {
    banner: fusion.band === 'URGENT',
    band: fusion.band,
    scoreText: formatScore(fusion.score),
    configName: fusion.config_name,
    segments,
    markers: THRESHOLD_MARKERS,
    missingLabels: fusion.missing.map((m) => MODALITY_LABELS[m]),
  };
}

/** Holds the entered signals and the currently selected preset. Preset
 * switches re-query the server; rows are never reused across signal
 * changes. */
export class DashboardController {
  private signals: SignalPayload | null = null;
  private rows: FusionResult[] = [];
  private selected = 'Base setting';

  constructor(private readonly client: ApiClient) {}

  hasSignals(): boolean {
    return this.signals !== null && Object.keys(this.signals).length > 0;
  }

  setSignals(signals: SignalPayload): void {
    this.signals = signals;
    this.rows = [];
  }

  presetNames(): string[] {
    return this.rows.map((r) => r.config_name);
  }

  /** Re-runs the server sweep and returns the view for `preset`. */
  async selectPreset(preset: string): Promise<DashboardView> {
    if (!this.hasSignals()) {
      throw new Error('dashboard disabled until a signal exists');
    }
    const reply = await this.client.sweep(this.signals as SignalPayload);
    if (reply.status !== 200 || isApiError(reply.body)) {
      const detail = isApiError(reply.body) ? reply.body.detail : String(reply.status);
      throw new Error(`sweep failed: ${detail}`);
    }
    this.rows = reply.body.sweep;
    const row = this.rows.find((r) => r.config_name === preset);
    if (!row) {
      throw new Error(`unknown preset ${preset}`);
    }
    this.selected = preset;
    return dashboardView(row);
  }

  selectedPreset(): string {
    return this.selected;
  }
}
