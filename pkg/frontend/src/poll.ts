/**
 * Polling for long-running generation: the server answers 202 with a poll
 * URL when a call misses its wait window. Poll at 1s, backing off gently.
 */

import { Api, ApiError, ApiResponse, PendingJob } from './api.js';

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  timeoutMs?: number;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

interface JobView {
  state: 'running' | 'done';
  kind?: string;
  result?: unknown;
}

export async function pollJob<T>(api: Api, pollUrl: string, options: PollOptions = {}): Promise<T> {
  const { intervalMs = 1000, backoff = 1.5, maxIntervalMs = 5000, timeoutMs = 180000 } = options;
  const deadline = Date.now() + timeoutMs;
  let wait = intervalMs;
  for (;;) {
    const { data } = await api.get<JobView>(pollUrl); // failed jobs throw ApiError here
    if (data.state === 'done') {
      return data.result as T;
    }
    if (Date.now() > deadline) {
      throw new ApiError(408, { code: 'busy', message: 'generation timed out', retriable: true });
    }
    await sleep(wait);
    wait = Math.min(wait * backoff, maxIntervalMs);
  }
}

/** Unwrap a generation response: 200 carries the result, 202 a job to poll. */
export async function resolveGeneration<T>(
  api: Api,
  response: ApiResponse<T | PendingJob>,
  options: PollOptions = {},
): Promise<T> {
  if (response.status === 202) {
    const job = response.data as PendingJob;
    return pollJob<T>(api, job.poll, options);
  }
  return response.data as T;
}

/** Wait until the session's outline is ready; throws on a failed outline. */
export async function waitOutlineReady(api: Api, sessionId: string, options: PollOptions = {}): Promise<void> {
  const { intervalMs = 1000, backoff = 1.5, maxIntervalMs = 5000, timeoutMs = 180000 } = options;
  const deadline = Date.now() + timeoutMs;
  let wait = intervalMs;
  for (;;) {
    const { data } = await api.get<{ state: string; message?: string }>(
      `/sessions/${sessionId}/outline-status`,
    );
    if (data.state === 'ready') {
      return;
    }
    if (data.state === 'failed') {
      throw new ApiError(502, {
        code: 'provider_unavailable',
        message: data.message ?? 'outline generation failed',
        retriable: true,
      });
    }
    if (Date.now() > deadline) {
      throw new ApiError(408, { code: 'busy', message: 'outline timed out', retriable: true });
    }
    await sleep(wait);
    wait = Math.min(wait * backoff, maxIntervalMs);
  }
}
