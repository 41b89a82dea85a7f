/** Thin HTTP client for the screening service. Fetch is injectable so
 * contract tests can run against recorded responses in node. */

import type {
  ApiReply,
  EncounterRecord,
  ImageSignal,
  Modality,
  SpeechSignal,
  SweepResponse,
  TriageResult,
} from './types.js';

export type FetchLike = (
  url: string,
  init?: RequestInit
) => Promise<{ status: number; json(): Promise<unknown> }>;

export type SignalPayload = Partial<Record<Modality, number>> & {
  urgent?: boolean;
};

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private async postJson<T>(path: string, payload: unknown): Promise<ApiReply<T>> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
    return { status: resp.status, body: (await resp.json()) as ApiReply<T>['body'] };
  }

  private withEncounter(path: string, encounter?: string): string {
    return encounter ? `${path}?encounter=${encodeURIComponent(encounter)}` : path;
  }

  postTriage(
    payload: Record<string, unknown>,
    encounter?: string
  ): Promise<ApiReply<TriageResult>> {
    return this.postJson(this.withEncounter('/triage', encounter), payload);
  }

  postTranscript(text: string, encounter?: string): Promise<ApiReply<SpeechSignal>> {
    return this.postJson(this.withEncounter('/transcript', encounter), { text });
  }

  postImageSignal(
    probability: number,
    source: string,
    encounter?: string
  ): Promise<ApiReply<ImageSignal>> {
    return this.postJson(this.withEncounter('/image-signal', encounter), {
      probability,
      source,
    });
  }

  async uploadCough(file: Blob, encounter?: string): Promise<ApiReply<unknown>> {
    const form = new FormData();
    form.append('file', file, 'cough.wav');
    const resp = await this.fetchImpl(this.withEncounter(this.baseUrl + '/cough', encounter), {
      method: 'POST',
      body: form,
    });
    return { status: resp.status, body: (await resp.json()) as never };
  }

  fuse(signals: SignalPayload, encounter?: string): Promise<ApiReply<EncounterRecord>> {
    const payload: Record<string, unknown> = { signals };
    if (encounter) payload.encounter = encounter;
    return this.postJson('/fuse', payload);
  }

  /** What-if view: every preset evaluated server-side in one round trip. */
  sweep(signals: SignalPayload): Promise<ApiReply<SweepResponse>> {
    return this.postJson('/fuse', { signals, sweep: true });
  }

  async getEncounter(id: string): Promise<ApiReply<EncounterRecord>> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/encounters/${encodeURIComponent(id)}`
    );
    return { status: resp.status, body: (await resp.json()) as never };
  }
}
