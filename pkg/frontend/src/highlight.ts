/**
 * Turns server-provided highlight offsets into render-ready segments.
 *
 * Spans come straight from the keyword scanner and routinely overlap
 * ("cpr 24" inside "cpr 24.2"), so they are merged into disjoint intervals
 * first. Merged intervals that sit close together form a cluster; clusters
 * feed the in-text jump links for long judgments.
 */

import type { HighlightSpan } from "./types.js";

export interface TextSegment {
  text: string;
  highlighted: boolean;
  variants: string[];
  /** Cluster index for the first segment of a cluster, else null. */
  clusterStart: number | null;
}

export interface HighlightCluster {
  index: number;
  charStart: number;
  segmentCount: number;
  variants: string[];
}

interface MergedSpan {
  start: number;
  end: number;
  variants: string[];
}

export function mergeSpans(spans: HighlightSpan[]): MergedSpan[] {
  const sorted = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const merged: MergedSpan[] = [];
  for (const span of sorted) {
    const last = merged[merged.length - 1];
    if (last && span.start <= last.end) {
      last.end = Math.max(last.end, span.end);
      if (!last.variants.includes(span.variant)) {
        last.variants.push(span.variant);
      }
    } else {
      merged.push({ start: span.start, end: span.end, variants: [span.variant] });
    }
  }
  return merged;
}

/** Gap (in characters) between merged spans that still counts as one cluster. */
export const CLUSTER_GAP = 400;

export function segmentText(text: string, spans: HighlightSpan[]): {
  segments: TextSegment[];
  clusters: HighlightCluster[];
} {
  const merged = mergeSpans(spans).filter((s) => s.start < text.length);
  const segments: TextSegment[] = [];
  const clusters: HighlightCluster[] = [];
  let cursor = 0;
  let clusterEnd = -Infinity;

  for (const span of merged) {
    if (span.start > cursor) {
      segments.push({
        text: text.slice(cursor, span.start),
        highlighted: false,
        variants: [],
        clusterStart: null,
      });
    }
    let clusterStart: number | null = null;
    if (span.start - clusterEnd > CLUSTER_GAP) {
      clusterStart = clusters.length;
      clusters.push({
        index: clusters.length,
        charStart: span.start,
        segmentCount: 0,
        variants: [],
      });
    }
    const cluster = clusters[clusters.length - 1];
    cluster.segmentCount += 1;
    for (const variant of span.variants) {
      if (!cluster.variants.includes(variant)) {
        cluster.variants.push(variant);
      }
    }
    segments.push({
      text: text.slice(span.start, Math.min(span.end, text.length)),
      highlighted: true,
      variants: span.variants,
      clusterStart,
    });
    cursor = Math.min(span.end, text.length);
    clusterEnd = span.end;
  }
  if (cursor < text.length) {
    segments.push({
      text: text.slice(cursor),
      highlighted: false,
      variants: [],
      clusterStart: null,
    });
  }
  return { segments, clusters };
}
