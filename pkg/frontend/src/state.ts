/**
 * Review session state machine.
 *
 * The server is the source of truth throughout: the controller only ever
 * displays what the API returned, advances to the next case strictly after
 * the label was acknowledged (optimistic advancing is deliberately
 * impossible), and a page refresh simply builds a fresh controller that
 * resumes wherever the server-side queue stands. Metrics are always the
 * server's numbers, never computed here.
 */

import { ApiError, ReviewApi } from "./api.js";
import type {
  CasePayload,
  Label,
  MetricsPayload,
  PredictionsPayload,
  Progress,
  SessionInfo,
} from "./types.js";

export type Phase =
  | "loading"
  | "reviewing"
  | "submitting"
  | "complete"
  | "disconnected";

export interface RevealedDecision {
  caseId: string;
  submitted: Label;
  predictions: PredictionsPayload | null;
}

export interface ViewState {
  phase: Phase;
  session: SessionInfo | null;
  progress: Progress | null;
  currentCase: CasePayload | null;
  metrics: MetricsPayload | null;
  /** Post-hoc reveal for the case labelled most recently. */
  lastDecision: RevealedDecision | null;
  /** Server-issued rejection shown inline; the case stays on screen. */
  inlineError: string | null;
  /** Transport failure message behind the retry banner. */
  connectionError: string | null;
}

type Listener = (state: ViewState) => void;

export class ReviewController {
  private readonly api: ReviewApi;
  private readonly reviewer: string;
  private state: ViewState = {
    phase: "loading",
    session: null,
    progress: null,
    currentCase: null,
    metrics: null,
    lastDecision: null,
    inlineError: null,
    connectionError: null,
  };
  private listeners: Listener[] = [];
  private retryAction: (() => Promise<void>) | null = null;

  constructor(api: ReviewApi, reviewer = "") {
    this.api = api;
    this.reviewer = reviewer;
  }

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Entry point: load session info and the first pending case. */
  async start(): Promise<void> {
    this.retryAction = () => this.start();
    try {
      const session = await this.api.session();
      this.update({ session, connectionError: null });
      await this.loadNext();
    } catch (error) {
      this.disconnect(error, () => this.start());
    }
  }

  async loadNext(): Promise<void> {
    this.retryAction = () => this.loadNext();
    this.update({ phase: "loading", inlineError: null });
    try {
      const payload = await this.api.nextCase();
      if (payload.done) {
        this.update({
          phase: "complete",
          progress: payload.progress,
          currentCase: null,
          metrics: payload.metrics,
          connectionError: null,
        });
      } else {
        this.update({
          phase: "reviewing",
          progress: payload.progress,
          currentCase: payload.case,
          connectionError: null,
        });
      }
    } catch (error) {
      this.disconnect(error, () => this.loadNext());
    }
  }

  /**
   * Submit a label for the case on screen. Advances only on server ack;
   * rejections keep the case up with an inline error.
   */
  async submit(label: Label): Promise<void> {
    if (this.state.phase !== "reviewing" || !this.state.currentCase) {
      return;
    }
    const caseId = this.state.currentCase.id;
    this.update({ phase: "submitting", inlineError: null });
    try {
      const ack = await this.api.submitLabel(caseId, label, this.reviewer);
      const predictions = await this.api.predictions(caseId);
      this.update({
        progress: ack.progress,
        lastDecision: { caseId, submitted: label, predictions },
        connectionError: null,
      });
      await this.loadNext();
    } catch (error) {
      if (error instanceof ApiError) {
        this.update({ phase: "reviewing", inlineError: error.message });
      } else {
        // Resubmitting after a reconnect is safe: the server treats a repeat
        // as an overwrite, and the UI shows whatever the server acked.
        this.disconnect(error, () => {
          this.update({ phase: "reviewing" });
          return this.submit(label);
        });
      }
    }
  }

  /** Re-run whatever request hit the network failure. No data is lost. */
  async retry(): Promise<void> {
    const action = this.retryAction;
    if (action) {
      await action();
    }
  }

  async refreshMetrics(): Promise<void> {
    try {
      const metrics = await this.api.metrics();
      this.update({ metrics });
    } catch (error) {
      this.disconnect(error, () => this.refreshMetrics());
    }
  }

  private disconnect(error: unknown, retry: () => Promise<void>): void {
    this.retryAction = retry;
    const message = error instanceof Error ? error.message : String(error);
    this.update({ phase: "disconnected", connectionError: message });
  }
}
