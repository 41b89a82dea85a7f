import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { DashboardController, dashboardView } from '../src/dashboard.js';
import { renderDashboard } from '../src/render.js';
import type { EncounterRecord, FusionResult, SweepResponse } from '../src/types.js';
import { fixture, recordedFetch } from './helpers.js';

function fusionOf(name: string): FusionResult {
  return (fixture(name).body as EncounterRecord).fusion;
}

describe('fusion dashboard', () => {
  it('displays the server score verbatim, never a client recomputation', () => {
    const doctored: FusionResult = { ...fusionOf('fuse_full'), score: 0.1234 };
    // the contributions still sum to the original score; a client that
    // recomputed would disagree with the doctored value
    const view = dashboardView(doctored);
    expect(view.scoreText).toBe('0.1234');
    expect(renderDashboard(view)).toContain('Fused score 0.1234');
  });

  it('bar segments are the server contributions in fixed modality order', () => {
    const fusion = fusionOf('fuse_full');
    const view = dashboardView(fusion);
    expect(view.segments.map((s) => s.modality)).toEqual(
      ['img', 'sym', 'cgh', 'sp']
    );
    for (const seg of view.segments) {
      expect(seg.value).toBe(fusion.contributions[seg.modality]);
    }
  });

  it('threshold markers sit at 0.50 and 0.75', () => {
    const html = renderDashboard(dashboardView(fusionOf('fuse_full')));
    expect(html).toContain('left:50%');
    expect(html).toContain('left:75%');
  });

  it('missing modalities render as explicit grey slots with tooltips', () => {
    const view = dashboardView(fusionOf('fuse_missing'));
    const missing = view.segments.filter((s) => s.missing);
    expect(missing.map((s) => s.label)).toEqual(['cough', 'speech']);
    expect(missing.every((s) => s.value === 0)).toBe(true);
    const present = view.segments.find((s) => s.modality === 'img');
    expect(present?.tooltip).toContain('effective weight 0.6667');
    const html = renderDashboard(view);
    expect(html).toContain('cough (missing)');
    expect(html).toContain('Missing modalities: cough, speech');
  });

  it('URGENT banner dominates regardless of score', () => {
    const fusion = fusionOf('fuse_urgent');
    expect(fusion.score).toBeLessThan(0.5);
    const html = renderDashboard(dashboardView(fusion));
    expect(html.startsWith('<div class="urgent-banner"')).toBe(true);
    expect(html).toContain('>URGENT</span>');
  });

  it('is disabled until a signal exists', async () => {
    const { fetch } = recordedFetch([]);
    const controller = new DashboardController(new ApiClient('', fetch));
    expect(controller.hasSignals()).toBe(false);
    await expect(controller.selectPreset('Base setting')).rejects.toThrow(
      /disabled/
    );
  });
});

describe('preset sweep', () => {
  it('each preset switch re-queries /fuse with sweep', async () => {
    const { fetch, calls } = recordedFetch([fixture('sweep'), fixture('sweep')]);
    const controller = new DashboardController(new ApiClient('', fetch));
    controller.setSignals({ img: 0.9, sym: 0.5, cgh: 0.4, sp: 0.25 });

    const base = await controller.selectPreset('Base setting');
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe('/fuse');
    expect(calls[0].payload).toMatchObject({ sweep: true });

    const dominant = await controller.selectPreset('Image-dominant');
    expect(calls).toHaveLength(2);

    const rows = (fixture('sweep').body as SweepResponse).sweep;
    const baseRow = rows.find((r) => r.config_name === 'Base setting')!;
    const domRow = rows.find((r) => r.config_name === 'Image-dominant')!;
    expect(base.scoreText).toBe(baseRow.score.toFixed(4));
    expect(dominant.scoreText).toBe(domRow.score.toFixed(4));
    expect(base.band).toBe(baseRow.band);
    expect(dominant.band).toBe(domRow.band);
    expect(controller.selectedPreset()).toBe('Image-dominant');
  });
});
