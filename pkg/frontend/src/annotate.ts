/** Annotation view models: locate returned spans inside the sentence and
 * lay them out as non-overlapping colored segments. Sub-role spans claim
 * their text first (they are the more specific annotation) and broader
 * main-role spans are clipped around them, so "A [6-year-old] boy" keeps
 * the subject color on the unclaimed parts. Every segment carries the span
 * the model actually returned; spans that cannot be located render
 * uncolored rather than guessed. */

import { roleColor } from "./palette.js";
import type { BulkRow, WireEvent } from "./types.js";

export interface Segment {
  start: number;
  end: number;
  text: string; // exact sentence slice (a substring of the claimed span)
  role: string;
  span: string; // the span string the model returned
  color: string;
}

/** Case-insensitive occurrences of a span, left to right. */
function occurrences(sentence: string, span: string): number[] {
  const hits: number[] = [];
  if (!span) return hits;
  const haystack = sentence.toLowerCase();
  const needle = span.toLowerCase();
  let from = 0;
  for (;;) {
    const i = haystack.indexOf(needle, from);
    if (i < 0) break;
    hits.push(i);
    from = i + needle.length;
  }
  return hits;
}

/** Parts of [start, end) not yet covered by any segment. */
function uncovered(segments: Segment[], start: number, end: number): [number, number][] {
  let gaps: [number, number][] = [[start, end]];
  for (const s of segments) {
    const next: [number, number][] = [];
    for (const [lo, hi] of gaps) {
      if (s.end <= lo || hi <= s.start) {
        next.push([lo, hi]);
        continue;
      }
      if (lo < s.start) next.push([lo, s.start]);
      if (s.end < hi) next.push([s.end, hi]);
    }
    gaps = next;
  }
  return gaps;
}

export function segmentize(sentence: string, events: WireEvent[]): Segment[] {
  const claims: { role: string; span: string }[] = [];
  for (const event of events) {
    for (const [role, spans] of Object.entries(event.arguments)) {
      for (const span of spans) claims.push({ role, span });
    }
  }
  // Specific before broad: sub-roles first, then longer spans.
  const depth = (role: string) => (role.includes(".") ? 1 : 0);
  claims.sort(
    (a, b) => depth(b.role) - depth(a.role) || b.span.length - a.span.length,
  );

  const segments: Segment[] = [];
  for (const { role, span } of claims) {
    for (const start of occurrences(sentence, span)) {
      const gaps = uncovered(segments, start, start + span.length);
      if (gaps.length === 0) continue; // fully claimed: try the next occurrence
      for (let [lo, hi] of gaps) {
        while (lo < hi && sentence[lo] === " ") lo++;
        while (hi > lo && sentence[hi - 1] === " ") hi--;
        if (lo === hi) continue; // bare whitespace fringe
        const text = sentence.slice(lo, hi);
        segments.push({ start: lo, end: hi, text, role, span, color: roleColor(role) });
      }
      break;
    }
  }
  return segments.sort((a, b) => a.start - b.start);
}

export interface RenderedPiece {
  text: string;
  segment?: Segment;
}

/** Split the sentence into plain and colored pieces, in order. */
export function toPieces(sentence: string, segments: Segment[]): RenderedPiece[] {
  const pieces: RenderedPiece[] = [];
  let pos = 0;
  for (const segment of segments) {
    if (segment.start > pos) pieces.push({ text: sentence.slice(pos, segment.start) });
    pieces.push({ text: segment.text, segment });
    pos = segment.end;
  }
  if (pos < sentence.length) pieces.push({ text: sentence.slice(pos) });
  return pieces;
}

/** The copy/export pane content: exactly the wire schema, pretty-printed. */
export function exportJson(events: WireEvent[]): string {
  return JSON.stringify(events, null, 2);
}

export interface CompareRow {
  line: number;
  sentence: string;
  left: Segment[];
  right: Segment[];
}

export function compareRows(rows: BulkRow[]): CompareRow[] {
  return rows.map((row) => ({
    line: row.line,
    sentence: row.sentence,
    left: segmentize(row.sentence, row.events_a ?? []),
    right: segmentize(row.sentence, row.events_b ?? []),
  }));
}
