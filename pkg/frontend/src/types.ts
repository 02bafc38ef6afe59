/**
 * Payload shapes of the casesift review API. These mirror the server's JSON
 * exactly; the UI never derives or recomputes any of the numbers it shows.
 */

export type Label = "sj" | "non-sj";

export interface HighlightSpan {
  start: number;
  end: number;
  variant: string;
}

export interface CasePayload {
  id: string;
  court: string;
  hearing_date: string | null;
  word_count: number;
  text: string;
  highlights: HighlightSpan[];
}

export interface Progress {
  labelled: number;
  total: number;
  remaining: number;
}

export interface SessionInfo extends Progress {
  dataset: string;
  plan: string;
  reviewer: string;
  blind: boolean;
  done: boolean;
}

export interface ConfusionCounts {
  tp: number;
  fn: number;
  fp: number;
  tn: number;
}

export interface EvalReport {
  matrix: ConfusionCounts;
  precision: Record<Label, number>;
  recall: Record<Label, number>;
  f1: Record<Label, number>;
  macro_f1: number;
  weighted_f1: number;
  accuracy: number;
  correct_percentage: Record<Label, number>;
  warnings: string[];
}

export interface MetricsPayload {
  labelled: number;
  report: EvalReport | null;
}

export type NextCasePayload =
  | { done: false; progress: Progress; case: CasePayload }
  | { done: true; progress: Progress; metrics: MetricsPayload };

export interface LabelAck {
  ok: true;
  progress: Progress;
}

export interface MatrixPrediction {
  label: Label;
  fired_inclusions: string[];
  fired_exclusions: string[];
}

export interface LlmPrediction {
  label: string;
  reason: string;
  backend_id: string;
}

export interface PredictionsPayload {
  case_id: string;
  predictions: {
    matrix?: MatrixPrediction;
    llm?: LlmPrediction;
  };
}
