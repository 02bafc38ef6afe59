/**
 * Thin typed client over the review API.
 *
 * Two failure modes are kept distinct so the state machine can react
 * differently: ApiError carries a server-issued error payload (the session
 * is alive, the request was rejected), while network-level failures from
 * fetch propagate as-is and signal a disconnect worth a retry banner.
 */

import type {
  Label,
  LabelAck,
  MetricsPayload,
  NextCasePayload,
  PredictionsPayload,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ReviewApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const detail =
        body && typeof body === "object" && "error" in body
          ? String((body as { error: unknown }).error)
          : `request failed with status ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  session(): Promise<SessionInfo> {
    return this.request<SessionInfo>("/api/session");
  }

  nextCase(): Promise<NextCasePayload> {
    return this.request<NextCasePayload>("/api/cases/next");
  }

  submitLabel(caseId: string, label: Label, reviewer: string): Promise<LabelAck> {
    return this.request<LabelAck>("/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ case_id: caseId, label, reviewer }),
    });
  }

  metrics(): Promise<MetricsPayload> {
    return this.request<MetricsPayload>("/api/metrics");
  }

  /** Returns null while predictions are still blinded (or unknown id). */
  async predictions(caseId: string): Promise<PredictionsPayload | null> {
    try {
      return await this.request<PredictionsPayload>(
        `/api/predictions/${encodeURIComponent(caseId)}`,
      );
    } catch (error) {
      if (error instanceof ApiError && (error.status === 403 || error.status === 404)) {
        return null;
      }
      throw error;
    }
  }
}
