/** Typed client for the review service. The API key lives in this object
 * only; nothing in the UI ever touches persistent browser storage. */

import type {
  ApiError,
  EditAction,
  GenerateResponse,
  MetricsResponse,
  ReviewResponse,
  TitleSummary,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;
  readonly details?: unknown;

  constructor(status: number, body: ApiError) {
    super(body.message || body.code);
    this.code = body.code || "internal";
    this.status = status;
    this.details = body.details;
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private apiKey: string | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  setApiKey(key: string | null): void {
    this.apiKey = key && key.trim() ? key.trim() : null;
  }

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: ApiError;
      try {
        body = (await response.json()) as ApiError;
      } catch {
        body = { code: "internal", message: `HTTP ${response.status}` };
      }
      throw new ApiRequestError(response.status, body);
    }
    return response;
  }

  async createSession(
    profession: string,
    file: Blob,
    filename = "awt.csv",
  ): Promise<{ id: string; title_summary: TitleSummary }> {
    const form = new FormData();
    form.append("profession", profession);
    form.append("file", file, filename);
    const headers: Record<string, string> = {};
    if (this.apiKey) headers["X-Api-Key"] = this.apiKey;
    const response = await this.request("/sessions", {
      method: "POST",
      body: form,
      headers,
    });
    return response.json();
  }

  async getSession(id: string): Promise<{ session: unknown; title_summary: TitleSummary }> {
    return (await this.request(`/sessions/${id}`)).json();
  }

  async deleteSession(id: string): Promise<void> {
    await this.request(`/sessions/${id}`, { method: "DELETE" });
  }

  async generate(id: string, step: number): Promise<GenerateResponse> {
    return (await this.request(`/sessions/${id}/steps/${step}/generate`, { method: "POST" })).json();
  }

  async review(id: string, step: number, edits: EditAction[]): Promise<ReviewResponse> {
    const response = await this.request(`/sessions/${id}/steps/${step}/review`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ edits }),
    });
    return response.json();
  }

  async metrics(id: string): Promise<MetricsResponse> {
    return (await this.request(`/sessions/${id}/metrics`)).json();
  }

  async exportOcel(id: string): Promise<{ filename: string; data: Uint8Array }> {
    const response = await this.request(`/sessions/${id}/export/ocel`);
    const disposition = response.headers.get("Content-Disposition") || "";
    const match = /filename="([^"]+)"/.exec(disposition);
    const buffer = new Uint8Array(await response.arrayBuffer());
    return { filename: match ? match[1] : `ocel-${id}.json`, data: buffer };
  }
}
