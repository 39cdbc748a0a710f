import { describe, expect, it } from 'vitest';

import { Api, ApiError } from '../src/api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('Api', () => {
  it('unwraps the data envelope and reports the status', async () => {
    const api = new Api('http://test', async () => jsonResponse(200, { data: { ok: 1 } }));
    const { status, data } = await api.get<{ ok: number }>('/x');
    expect(status).toBe(200);
    expect(data.ok).toBe(1);
  });

  it('keeps 202 visible so callers can poll', async () => {
    const api = new Api('http://test', async () =>
      jsonResponse(202, { data: { state: 'running', job_id: 'j', poll: '/jobs/j' } }),
    );
    const { status, data } = await api.post<{ state: string }>('/x');
    expect(status).toBe(202);
    expect(data.state).toBe('running');
  });

  it('turns error envelopes into ApiError with code and retriable', async () => {
    const api = new Api('http://test', async () =>
      jsonResponse(409, { error: { code: 'busy', message: 'in flight', retriable: true } }),
    );
    const error = await api.post('/x').catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.code).toBe('busy');
    expect(error.retriable).toBe(true);
    expect(error.status).toBe(409);
  });

  it('sends JSON bodies with the right header and base url', async () => {
    let seenUrl = '';
    let seenInit: RequestInit | undefined;
    const api = new Api('http://base:9', async (url, init) => {
      seenUrl = url;
      seenInit = init;
      return jsonResponse(200, { data: {} });
    });
    await api.post('/sessions', { genre: 'fantasy' });
    expect(seenUrl).toBe('http://base:9/sessions');
    expect((seenInit!.headers as Record<string, string>)['content-type']).toBe('application/json');
    expect(JSON.parse(seenInit!.body as string).genre).toBe('fantasy');
  });
});
