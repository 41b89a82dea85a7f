import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { FetchLike } from '../src/api.js';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');

export interface RecordedReply {
  status: number;
  body: unknown;
}

export function fixture(name: string): RecordedReply {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), 'utf8'));
}

export interface RecordedCall {
  url: string;
  method: string;
  payload: unknown;
}

/** Fetch stub that replays recorded replies and logs every request. */
export function recordedFetch(
  replies: RecordedReply[]
): { fetch: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const queue = [...replies];
  const fetch: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? 'GET',
      payload:
        typeof init?.body === 'string' ? JSON.parse(init.body) : init?.body,
    });
    const reply = queue.shift();
    if (!reply) {
      throw new Error(`unexpected request to ${url}`);
    }
    return { status: reply.status, json: async () => reply.body };
  };
  return { fetch, calls };
}
