/** Typed client for the review backend's JSON API.
 *
 * Only the four reviewer endpoints are wired; the admin export is out of
 * scope for this UI. Server-side errors surface as ApiError carrying the
 * backend's {code, message} envelope; transport failures keep whatever
 * error fetch produced, so callers can tell "server said no" from
 * "server unreachable".
 */

export interface SessionInfo {
  session_token: string;
  reviewer_id: string;
  done: number;
  remaining: number;
}

export interface QueueItem {
  item_id: string;
  gold_text: string;
  candidate_text: string;
  judgment_excerpt: string | null;
  /** [1-based position, queue length] */
  position: [number, number];
}

export type QueueNext = QueueItem | { done: true };

export interface Progress {
  done: number;
  remaining: number;
}

export interface VerdictPayload {
  item_id: string;
  decisions: boolean[];
  reasoning: string;
  comment: string;
}

export interface SubmitResult {
  ok: true;
  done: number;
  remaining: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

export function isQueueItem(next: QueueNext): next is QueueItem {
  return (next as QueueItem).item_id !== undefined;
}

/** Shape the app depends on; tests substitute a scripted fake. */
export interface ReviewClient {
  login(token: string): Promise<SessionInfo>;
  next(sessionToken: string): Promise<QueueNext>;
  submit(sessionToken: string, payload: VerdictPayload): Promise<SubmitResult>;
  progress(sessionToken: string): Promise<Progress>;
}

type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ReviewApi implements ReviewClient {
  private readonly base: string;
  private readonly fetchFn: FetchFn;

  constructor(baseUrl = "", fetchFn?: FetchFn) {
    this.base = baseUrl.replace(/\/$/, "");
    const impl = fetchFn ?? fetch;
    this.fetchFn = (input, init) => impl(input, init);
  }

  async login(token: string): Promise<SessionInfo> {
    return this.request("POST", "/session", { body: { token } });
  }

  async next(sessionToken: string): Promise<QueueNext> {
    return this.request("GET", "/queue/next", { session: sessionToken });
  }

  async submit(sessionToken: string, payload: VerdictPayload): Promise<SubmitResult> {
    return this.request("POST", "/verdicts", { session: sessionToken, body: payload });
  }

  async progress(sessionToken: string): Promise<Progress> {
    return this.request("GET", "/progress", { session: sessionToken });
  }

  private async request<T>(
    method: string,
    path: string,
    opts: { session?: string; body?: unknown } = {},
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (opts.session !== undefined) {
      headers["Authorization"] = `Bearer ${opts.session}`;
    }
    const init: RequestInit = { method, headers };
    if (opts.body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(opts.body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let code = `http_${response.status}`;
  let message = response.statusText || code;
  try {
    const body: unknown = await response.json();
    if (body && typeof body === "object") {
      const envelope = body as { code?: unknown; message?: unknown };
      if (typeof envelope.code === "string") code = envelope.code;
      if (typeof envelope.message === "string") message = envelope.message;
    }
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiError(response.status, code, message);
}
