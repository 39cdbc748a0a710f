/**
 * GameClient: the flow the screens drive, one instance per playthrough.
 *
 * The client is deliberately dumb: after every mutation it re-reads the
 * session from the server, so `session` always mirrors server state and a
 * page reload reconstructs the same view from GET /sessions/{id}.
 */

import {
  Api,
  ApiError,
  Genre,
  HistoryPage,
  PendingJob,
  QueryRecord,
  Sample,
  Segment,
  SessionView,
} from './api.js';
import { PollOptions, resolveGeneration, waitOutlineReady } from './poll.js';

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

function requestToken(): string {
  const bytes = new Uint8Array(9);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, '0')).join('');
}

export class GameClient {
  session: SessionView | null = null;
  private sessionId: string | null = null;
  private choiceInFlight: Promise<SessionView> | null = null;

  constructor(
    private readonly api: Api,
    private readonly pollOptions: PollOptions = {},
  ) {}

  get id(): string {
    if (!this.sessionId) {
      throw new Error('no session started');
    }
    return this.sessionId;
  }

  async listGenres(): Promise<Genre[]> {
    const { data } = await this.api.get<{ genres: Genre[] }>('/genres');
    return data.genres;
  }

  async start(genre: string, premise?: string): Promise<string> {
    const { data } = await this.api.post<{ session_id: string }>('/sessions', {
      genre,
      premise: premise || null,
    });
    this.sessionId = data.session_id;
    await this.refresh();
    return data.session_id;
  }

  /** Resume an existing session purely from server state. */
  async resume(sessionId: string): Promise<SessionView> {
    this.sessionId = sessionId;
    return this.refresh();
  }

  async refresh(): Promise<SessionView> {
    const { data } = await this.api.get<SessionView>(`/sessions/${this.id}`);
    this.session = data;
    return data;
  }

  /** Six leveled samples; the server starts outline generation alongside. */
  async generateSamples(): Promise<Sample[]> {
    const response = await this.api.post<{ samples: Sample[] } | PendingJob>(
      `/sessions/${this.id}/samples`,
    );
    const result = await resolveGeneration<{ samples: Sample[] }>(this.api, response, this.pollOptions);
    await this.refresh();
    return result.samples;
  }

  /**
   * Post the picked level. Retries on retriable conflicts (the outline job
   * may briefly hold the session) so the picker can stay dumb.
   */
  async selectLevel(level: string, attempts = 8): Promise<SessionView> {
    for (let attempt = 1; ; attempt++) {
      try {
        await this.api.post<SessionView>(`/sessions/${this.id}/level`, { level });
        return this.refresh();
      } catch (error) {
        if (error instanceof ApiError && error.retriable && attempt < attempts) {
          await sleep(250 * attempt);
          continue;
        }
        throw error;
      }
    }
  }

  async waitOutline(): Promise<void> {
    await waitOutlineReady(this.api, this.id, this.pollOptions);
  }

  async nextSegment(): Promise<Segment> {
    const response = await this.api.post<{ segment: Segment } | PendingJob>(
      `/sessions/${this.id}/segments`,
    );
    const result = await resolveGeneration<{ segment: Segment }>(this.api, response, this.pollOptions);
    await this.refresh();
    return result.segment;
  }

  /**
   * Apply a choice. Rapid duplicate calls (double-click) collapse onto the
   * in-flight request, and the request token makes any replay idempotent
   * server-side, so the cursor can never advance twice for one click.
   */
  choose(optionIndex: number): Promise<SessionView> {
    if (this.choiceInFlight) {
      return this.choiceInFlight;
    }
    const token = requestToken();
    this.choiceInFlight = this.api
      .post<SessionView>(`/sessions/${this.id}/choices`, {
        option_index: optionIndex,
        request_token: token,
      })
      .then(() => this.refresh())
      .finally(() => {
        this.choiceInFlight = null;
      });
    return this.choiceInFlight;
  }

  async finishStory(): Promise<Segment> {
    const response = await this.api.post<{ segment: Segment } | PendingJob>(
      `/sessions/${this.id}/ending`,
    );
    const result = await resolveGeneration<{ segment: Segment }>(this.api, response, this.pollOptions);
    await this.refresh();
    return result.segment;
  }

  async explain(segmentId: string, selected: string, offsets: [number, number]): Promise<QueryRecord> {
    const { data } = await this.api.post<{ record: QueryRecord }>(`/sessions/${this.id}/queries`, {
      segment_id: segmentId,
      selected_string: selected,
      offsets,
    });
    return data.record;
  }

  async history(offset = 0, limit = 50): Promise<HistoryPage> {
    const { data } = await this.api.get<HistoryPage>(
      `/sessions/${this.id}/queries?offset=${offset}&limit=${limit}`,
    );
    return data;
  }

  /** The segment currently on the table, straight from server state. */
  currentSegment(): Segment | null {
    const segments = this.session?.segments ?? [];
    return segments.length ? segments[segments.length - 1] : null;
  }
}
