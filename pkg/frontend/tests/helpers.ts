import type {
  CasePayload,
  MetricsPayload,
  NextCasePayload,
  Progress,
  SessionInfo,
} from "../src/types.js";

export function makeCase(id: string, overrides: Partial<CasePayload> = {}): CasePayload {
  return {
    id,
    court: "United Kingdom Supreme Court",
    hearing_date: "2010-05-01",
    word_count: 42,
    text: `Body of ${id} mentioning summary judgment terms.`,
    highlights: [],
    ...overrides,
  };
}

export function progress(labelled: number, total: number): Progress {
  return { labelled, total, remaining: total - labelled };
}

export function session(labelled: number, total: number): SessionInfo {
  return {
    dataset: "regex_sj",
    plan: "regex_sj",
    reviewer: "tester",
    blind: true,
    done: labelled >= total,
    ...progress(labelled, total),
  };
}

export function nextPayload(id: string, labelled: number, total: number): NextCasePayload {
  return { done: false, progress: progress(labelled, total), case: makeCase(id) };
}

export function donePayload(total: number, metrics: MetricsPayload): NextCasePayload {
  return { done: true, progress: progress(total, total), metrics };
}

export const SAMPLE_METRICS: MetricsPayload = {
  labelled: 4,
  report: {
    matrix: { tp: 2, fn: 0, fp: 1, tn: 1 },
    precision: { sj: 2 / 3, "non-sj": 1.0 },
    recall: { sj: 1.0, "non-sj": 0.5 },
    f1: { sj: 0.8, "non-sj": 2 / 3 },
    macro_f1: (0.8 + 2 / 3) / 2,
    weighted_f1: (2 * 0.8 + 2 * (2 / 3)) / 4,
    accuracy: 0.75,
    correct_percentage: { sj: (200 / 3), "non-sj": 100.0 },
    warnings: [],
  },
};

type Responder = (input: string, init?: RequestInit) => Promise<Response> | Response;

/**
 * Scripted fetch stub: each call pops the next responder. Pushing an Error
 * simulates a network-level failure (fetch rejects).
 */
export function scriptedFetch(script: Array<Responder | Error>) {
  const calls: Array<{ input: string; init?: RequestInit }> = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    calls.push({ input, init });
    const step = script.shift();
    if (step === undefined) {
      throw new Error(`unexpected fetch call: ${input}`);
    }
    if (step instanceof Error) {
      throw step;
    }
    return step(input, init);
  };
  return { fetchFn, calls };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
