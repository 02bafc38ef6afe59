/**
 * DOM rendering for the review screen: progress header, highlighted judgment
 * text with jump links, sticky decision bar, post-hoc prediction panel,
 * retry banner and completion screen. Every number shown comes verbatim
 * from a server payload.
 */

import { segmentText } from "./highlight.js";
import type { ViewState } from "./state.js";
import type { EvalReport, MetricsPayload } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatScore(value: number): string {
  return value.toFixed(4);
}

export function formatPercent(value: number): string {
  return `${value.toFixed(1)}%`;
}

function progressBar(labelled: number, total: number): string {
  const pct = total > 0 ? Math.round((labelled / total) * 100) : 0;
  return `
    <div class="progress" role="progressbar" aria-valuenow="${labelled}" aria-valuemax="${total}">
      <div class="progress-fill" style="width: ${pct}%"></div>
      <span class="progress-text" data-testid="progress">${labelled}/${total} labelled</span>
    </div>`;
}

export function renderMetricsTable(metrics: MetricsPayload): string {
  if (!metrics.report) {
    return `<p class="muted">No labels yet; nothing to score.</p>`;
  }
  const r: EvalReport = metrics.report;
  const warnings = r.warnings.length
    ? `<p class="warnings">${r.warnings.map(escapeHtml).join("<br>")}</p>`
    : "";
  return `
    <table class="metrics" data-testid="metrics-table">
      <tr><th></th><th>Predicted SJ</th><th>Predicted non-SJ</th></tr>
      <tr><th>Actual SJ</th><td data-testid="tp">${r.matrix.tp}</td><td>${r.matrix.fn}</td></tr>
      <tr><th>Actual non-SJ</th><td>${r.matrix.fp}</td><td>${r.matrix.tn}</td></tr>
    </table>
    <dl class="scores">
      <dt>F1 (SJ)</dt><dd data-testid="f1-sj">${formatScore(r.f1["sj"])}</dd>
      <dt>F1 (non-SJ)</dt><dd data-testid="f1-non-sj">${formatScore(r.f1["non-sj"])}</dd>
      <dt>Macro F1</dt><dd data-testid="macro-f1">${formatScore(r.macro_f1)}</dd>
      <dt>Weighted F1</dt><dd data-testid="weighted-f1">${formatScore(r.weighted_f1)}</dd>
      <dt>Accuracy</dt><dd data-testid="accuracy">${formatScore(r.accuracy)}</dd>
      <dt>Correct % (SJ)</dt><dd>${formatPercent(r.correct_percentage["sj"])}</dd>
      <dt>Correct % (non-SJ)</dt><dd>${formatPercent(r.correct_percentage["non-sj"])}</dd>
    </dl>
    ${warnings}`;
}

function renderCaseBody(state: ViewState): string {
  const current = state.currentCase;
  if (!current) {
    return "";
  }
  const { segments, clusters } = segmentText(current.text, current.highlights);
  const jumpLinks = clusters.length
    ? `<nav class="jump-links" data-testid="jump-links">
        <span>Jump to matches:</span>
        ${clusters
          .map(
            (c) =>
              `<a href="#match-${c.index}" title="${escapeHtml(c.variants.join(", "))}">#${c.index + 1}</a>`,
          )
          .join(" ")}
      </nav>`
    : "";
  const body = segments
    .map((segment) => {
      const anchor = segment.clusterStart !== null ? ` id="match-${segment.clusterStart}"` : "";
      return segment.highlighted
        ? `<mark${anchor} title="${escapeHtml(segment.variants.join(", "))}">${escapeHtml(segment.text)}</mark>`
        : escapeHtml(segment.text);
    })
    .join("");
  const meta = [
    current.court || "unknown court",
    current.hearing_date ?? "undated",
    `${current.word_count.toLocaleString()} words`,
  ]
    .map(escapeHtml)
    .join(" · ");
  return `
    <section class="case" data-testid="case" data-case-id="${escapeHtml(current.id)}">
      <header class="case-meta">
        <h2 data-testid="case-id">${escapeHtml(current.id)}</h2>
        <p class="muted">${meta}</p>
      </header>
      ${jumpLinks}
      <article class="case-text" data-testid="case-text">${body}</article>
    </section>`;
}

function renderLastDecision(state: ViewState): string {
  const decision = state.lastDecision;
  if (!decision) {
    return "";
  }
  const parts: string[] = [
    `<p>You labelled <strong>${escapeHtml(decision.caseId)}</strong> as ` +
      `<strong>${decision.submitted === "sj" ? "SJ" : "non-SJ"}</strong>.</p>`,
  ];
  const predictions = decision.predictions?.predictions;
  if (!predictions) {
    parts.push(`<p class="muted">Pipeline predictions are hidden for this case.</p>`);
  } else {
    if (predictions.matrix) {
      const fired = predictions.matrix.fired_inclusions.join(", ") || "none";
      parts.push(
        `<p data-testid="reveal-matrix">Keyword matrix: <strong>${predictions.matrix.label}</strong>` +
          ` (rules: ${escapeHtml(fired)})</p>`,
      );
    }
    if (predictions.llm) {
      const reason = predictions.llm.reason
        ? ` — ${escapeHtml(predictions.llm.reason)}`
        : "";
      parts.push(
        `<p data-testid="reveal-llm">LLM: <strong>${escapeHtml(predictions.llm.label)}</strong>${reason}</p>`,
      );
    }
  }
  return `<aside class="last-decision" data-testid="last-decision">${parts.join("")}</aside>`;
}

export function render(root: HTMLElement, state: ViewState): void {
  const progress = state.progress ?? { labelled: 0, total: 0, remaining: 0 };
  const banner = state.connectionError
    ? `<div class="banner error" data-testid="retry-banner">
         Server unreachable: ${escapeHtml(state.connectionError)}
         <button type="button" data-action="retry">Retry</button>
       </div>`
    : "";
  const inlineError = state.inlineError
    ? `<p class="inline-error" data-testid="inline-error">${escapeHtml(state.inlineError)}</p>`
    : "";

  let main = "";
  if (state.phase === "complete") {
    main = `
      <section class="complete" data-testid="complete">
        <h2>Review complete</h2>
        <p>All ${progress.total} sampled cases are labelled.</p>
        ${state.metrics ? renderMetricsTable(state.metrics) : ""}
      </section>`;
  } else if (state.currentCase) {
    main = renderCaseBody(state);
  } else if (state.phase === "loading") {
    main = `<p class="muted" data-testid="loading">Loading…</p>`;
  }

  const submitting = state.phase === "submitting";
  const decisionBar =
    state.phase === "reviewing" || submitting
      ? `
      <footer class="decision-bar" data-testid="decision-bar">
        ${inlineError}
        <button type="button" data-action="label-sj" ${submitting ? "disabled" : ""}>
          Summary judgment <kbd>Y</kbd>
        </button>
        <button type="button" data-action="label-non-sj" ${submitting ? "disabled" : ""}>
          Not summary judgment <kbd>N</kbd>
        </button>
        ${submitting ? `<span class="muted">Saving…</span>` : ""}
      </footer>`
      : "";

  root.innerHTML = `
    ${banner}
    <header class="top">
      <h1>casesift review</h1>
      ${progressBar(progress.labelled, progress.total)}
    </header>
    ${renderLastDecision(state)}
    ${main}
    ${decisionBar}`;
}
