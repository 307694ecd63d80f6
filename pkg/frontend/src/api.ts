/** Thin API client. Concurrent identical GETs are deduplicated by query
 * key, and each panel tracks a sequence number so a slow response for an
 * abandoned query can never overwrite a newer view. */

import type {
  ArticlesPayload,
  BreakdownPayload,
  BulkPayload,
  CrossBreakdownPayload,
  DemographicsPayload,
  LiveAnnotationPayload,
  SearchPayload,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: unknown;

  constructor(status: number, body: unknown) {
    const message =
      body && typeof body === "object" && "error" in (body as object)
        ? String((body as { error: unknown }).error)
        : `HTTP ${status}`;
    super(message);
    this.status = status;
    this.body = body;
  }

  get degraded(): boolean {
    const b = this.body as { degraded?: unknown } | null;
    return !!b && typeof b === "object" && b.degraded === true;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly inFlight = new Map<string, Promise<unknown>>();

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async getJson<T>(path: string): Promise<T> {
    const url = this.baseUrl + path;
    const pending = this.inFlight.get(url);
    if (pending) return pending as Promise<T>;
    const promise = (async () => {
      try {
        const response = await this.fetchImpl(url);
        const body = await response.json().catch(() => null);
        if (!response.ok) throw new ApiRequestError(response.status, body);
        return body as T;
      } finally {
        this.inFlight.delete(url);
      }
    })();
    this.inFlight.set(url, promise);
    return promise;
  }

  private async postJson<T>(path: string, payload: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    const body = await response.json().catch(() => null);
    if (!response.ok) throw new ApiRequestError(response.status, body);
    return body as T;
  }

  search(query: string): Promise<SearchPayload> {
    return this.getJson(`/api/search?${query}`);
  }

  articles(query: string): Promise<ArticlesPayload> {
    return this.getJson(`/api/articles?${query}`);
  }

  demographics(query: string): Promise<DemographicsPayload> {
    return this.getJson(`/api/demographics?${query}`);
  }

  breakdown(query: string): Promise<BreakdownPayload> {
    return this.getJson(`/api/breakdown?${query}`);
  }

  crossBreakdown(query: string): Promise<CrossBreakdownPayload> {
    return this.getJson(`/api/crossbreakdown?${query}`);
  }

  suggest(kind: string, prefix: string): Promise<{ suggestions: string[] }> {
    const params = new URLSearchParams({ kind, prefix });
    return this.getJson(`/api/suggest?${params}`);
  }

  drugInfo(name: string): Promise<Record<string, unknown>> {
    return this.getJson(`/api/druginfo?${new URLSearchParams({ name })}`);
  }

  annotateLive(sentence: string, model: string): Promise<LiveAnnotationPayload> {
    return this.postJson("/api/annotate/live", { sentence, model });
  }

  async bulkUpload(text: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/annotate/bulk`, {
      method: "POST",
      headers: { "content-type": "text/plain" },
      body: text,
    });
    const body = await response.json().catch(() => null);
    if (!response.ok) throw new ApiRequestError(response.status, body);
    return (body as { session_id: string }).session_id;
  }

  bulkResults(sid: string, params: URLSearchParams): Promise<BulkPayload> {
    return this.getJson(`/api/annotate/bulk/${sid}?${params}`);
  }

  bulkCompare(sid: string, payload: unknown): Promise<BulkPayload> {
    return this.postJson(`/api/annotate/bulk/${sid}/compare`, payload);
  }
}

/** Monotone sequence gate: a panel keeps one of these and drops responses
 * whose ticket is no longer the latest. */
export class SequenceGate {
  private latest = 0;

  issue(): number {
    return ++this.latest;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}
