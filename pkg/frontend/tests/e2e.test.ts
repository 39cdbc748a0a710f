/**
 * End-to-end: the UI's client layer against a real backend in mock mode.
 * Spawns the Python server, then drives the exact flow the screens use.
 */

import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { Api } from '../src/api.js';
import { GameClient } from '../src/game.js';

const PORT = 8950 + (process.pid % 40);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let storeDir: string;

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 200; attempt++) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 100));
  }
  throw new Error('backend never became healthy');
}

beforeAll(async () => {
  storeDir = mkdtempSync(join(tmpdir(), 'storyloom-e2e-'));
  server = spawn(
    'python3',
    ['-m', 'uvicorn', '--factory', 'storyloom.api.app:create_app', '--port', String(PORT), '--log-level', 'warning'],
    {
      cwd: resolve(__dirname, '..', '..'),
      env: {
        ...process.env,
        STORYLOOM_MOCK_MODE: '1',
        STORYLOOM_MOCK_SEED: '3',
        STORYLOOM_STORAGE_PATH: storeDir,
      },
      stdio: 'inherit',
    },
  );
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
  if (storeDir) {
    rmSync(storeDir, { recursive: true, force: true });
  }
});

describe('full playthrough through the UI client', () => {
  it('initiation -> level pick -> 6 choices -> ending -> 3 queries -> history', async () => {
    const client = new GameClient(new Api(BASE), { intervalMs: 100 });

    // initiation screen: catalog + start
    const genres = await client.listGenres();
    expect(genres.map((g) => g.genre_id)).toContain('fantasy');
    expect(genres[0].example_works.length).toBeGreaterThan(0);
    await client.start('fantasy', 'a lighthouse keeper and a lost letter');

    // level picker: six samples (polling if 202), outline progress, pick B1
    const samples = await client.generateSamples();
    expect(samples.map((s) => s.level)).toEqual(['A1', 'A2', 'B1', 'B2', 'C1', 'C2']);

    // re-selection before the story starts is allowed; last write wins
    await client.waitOutline();
    await client.selectLevel('A2');
    await client.selectLevel('B1');
    expect((await client.refresh()).level).toBe('B1');

    // reader loop: six decisions
    for (let turn = 0; turn < 6; turn++) {
      const segment = await client.nextSegment();
      expect(segment.options).toHaveLength(3);
      const session = await client.choose(turn % 3);
      expect(session.summary_count).toBe(turn + 1);
    }

    // ending: no options, session ended
    const ending = await client.finishStory();
    expect(ending.options).toEqual([]);
    expect(client.session!.status).toBe('ended');
    expect(client.session!.segments).toHaveLength(7);

    // three vocabulary queries on the final segment's text
    const lastStory = client.session!.segments[5];
    const words = ['level', 'cold', 'moment'];
    for (const word of words) {
      const start = lastStory.text.indexOf(word);
      expect(start).toBeGreaterThanOrEqual(0);
      const record = await client.explain(lastStory.segment_id, word, [start, start + word.length]);
      expect(record.explanation.length).toBeGreaterThan(0);
      expect(record.level).toBe('B1');
    }

    // history panel: 3 records, newest first
    const history = await client.history();
    expect(history.total).toBe(3);
    expect(history.records.map((r) => r.selected_string)).toEqual(['moment', 'cold', 'level']);

    // pure client: resuming from scratch reproduces the same view
    const fresh = new GameClient(new Api(BASE), { intervalMs: 100 });
    const resumed = await fresh.resume(client.id);
    expect(resumed).toEqual(client.session);
  });

  it('a double-click on a choice advances exactly once', async () => {
    const client = new GameClient(new Api(BASE), { intervalMs: 100 });
    await client.start('mystery');
    await client.generateSamples();
    await client.waitOutline();
    await client.selectLevel('B2');
    await client.nextSegment();

    // UI double-click: two synchronous calls collapse client-side
    const [first, second] = await Promise.all([client.choose(0), client.choose(0)]);
    expect(first).toBe(second);
    expect((await client.refresh()).summary_count).toBe(1);

    // and even raw duplicate requests with one token cannot double-advance
    await client.nextSegment();
    const api = new Api(BASE);
    const payload = { option_index: 1, request_token: 'dup-token-1' };
    const results = await Promise.allSettled([
      api.post(`/sessions/${client.id}/choices`, payload),
      api.post(`/sessions/${client.id}/choices`, payload),
    ]);
    expect(results.some((r) => r.status === 'fulfilled')).toBe(true);
    expect((await client.refresh()).summary_count).toBe(2);

    // replaying the same token later still does not advance
    await api.post(`/sessions/${client.id}/choices`, payload);
    expect((await client.refresh()).summary_count).toBe(2);
  });

  it('surfaces envelope error codes the UI can act on', async () => {
    const api = new Api(BASE);
    const notFound = await api.get('/sessions/does-not-exist').catch((e) => e);
    expect(notFound.code).toBe('not_found');
    expect(notFound.status).toBe(404);

    const badGenre = await api.post('/sessions', { genre: 'opera' }).catch((e) => e);
    expect(badGenre.code).toBe('validation');
    expect(badGenre.retriable).toBe(false);
  });
});
