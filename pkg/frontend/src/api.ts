/**
 * Envelope-aware HTTP client for the story service.
 *
 * Every JSON body is `{data: ...}` or `{error: {code, message, retriable}}`;
 * error envelopes become ApiError so callers can switch on `code` and use
 * `retriable` for retry affordances.
 */

export interface ApiErrorBody {
  code: string;
  message: string;
  retriable: boolean;
}

export class ApiError extends Error {
  readonly code: string;
  readonly retriable: boolean;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = 'ApiError';
    this.status = status;
    this.code = body.code;
    this.retriable = body.retriable;
  }
}

export interface Genre {
  genre_id: string;
  display_name: string;
  example_works: string;
}

export interface Sample {
  level: string;
  text: string;
}

export interface Cursor {
  milestone_index: number;
  decision_index: number;
  awaiting: 'segment' | 'choice' | 'ending' | 'done';
}

export interface Segment {
  segment_id: string;
  cursor_at_generation: Cursor;
  text: string;
  options: string[];
  chosen_option: number | null;
}

export interface SessionView {
  session_id: string;
  genre: string;
  premise: string | null;
  status: 'created' | 'sampling' | 'ready' | 'in_progress' | 'ended';
  level: string | null;
  config: Record<string, number>;
  cursor: Cursor;
  samples: Sample[];
  segments: Segment[];
  summary_count: number;
}

export interface QueryRecord {
  query_id: string;
  session_id: string;
  segment_ref: string;
  selected_string: string;
  context_window: string;
  level: string;
  explanation: string;
  created_at: string;
}

export interface HistoryPage {
  total: number;
  offset: number;
  records: QueryRecord[];
}

export interface PendingJob {
  state: 'running';
  job_id: string;
  poll: string;
}

export interface ApiResponse<T> {
  status: number;
  data: T;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async request<T>(method: string, path: string, body?: unknown): Promise<ApiResponse<T>> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      (init.headers as Record<string, string>)['content-type'] = 'application/json';
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const envelope = await response.json();
    if (envelope.error) {
      throw new ApiError(response.status, envelope.error as ApiErrorBody);
    }
    return { status: response.status, data: envelope.data as T };
  }

  get<T>(path: string): Promise<ApiResponse<T>> {
    return this.request<T>('GET', path);
  }

  post<T>(path: string, body?: unknown): Promise<ApiResponse<T>> {
    return this.request<T>('POST', path, body);
  }
}
