/** JSON shapes returned by the screening service. The UI treats every
 * numeric field here as authoritative and never recomputes it. */

export type BandName = 'LOW' | 'MODERATE' | 'HIGH' | 'URGENT';

export type Modality = 'img' | 'sym' | 'cgh' | 'sp';

export const MODALITIES: readonly Modality[] = ['img', 'sym', 'cgh', 'sp'];

export const MODALITY_LABELS: Record<Modality, string> = {
  img: 'imaging',
  sym: 'symptoms',
  cgh: 'cough',
  sp: 'speech',
};

export interface TriageResult {
  score: number;
  normalized: number;
  band: BandName;
  urgent_rules_fired: string[];
}

export interface FusionResult {
  score: number;
  band: BandName;
  contributions: Partial<Record<Modality, number>>;
  missing: Modality[];
  effective_weights: Partial<Record<Modality, number>>;
  urgent: boolean;
  config_name: string;
}

export interface EncounterRecord {
  id: string;
  created_at: string;
  inputs: Record<string, unknown>;
  signals: Partial<Record<Modality, number | null>> & { urgent?: boolean };
  fusion: FusionResult;
  report: string;
  config_digest: string;
}

export interface SweepResponse {
  sweep: FusionResult[];
}

export interface SpeechSignal {
  score: number;
  matched: string[];
  occurrences: Record<string, number>;
}

export interface ImageSignal {
  probability: number;
  source: string;
}

export interface ApiError {
  error: string;
  detail: string;
}

export interface ApiReply<T> {
  status: number;
  body: T | ApiError;
}

export function isApiError(body: unknown): body is ApiError {
  return (
    typeof body === 'object' &&
    body !== null &&
    'error' in body &&
    typeof (body as ApiError).error === 'string'
  );
}
