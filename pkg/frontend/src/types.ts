/** Payload shapes of the REST API (the service is the source of truth). */

export type TermKind = "drug" | "effect";
export type Source = "pubmed" | "faers";

export interface RankedTerm {
  term: string;
  count: number;
  proportion: number;
  tier: number; // 1 (common) .. 5 (rare)
}

export interface SearchPayload {
  source: Source;
  pmids: string[];
  total: number;
  yearly: Record<string, number>;
  top_terms: RankedTerm[];
}

export interface ArticleView {
  pmid: string;
  title: string;
  abstract: string;
  keywords: string[];
  year: number | null;
  link: string;
  highlights: [number, number][];
}

export interface ArticlesPayload {
  total: number;
  articles: ArticleView[];
}

export interface DemographicsPayload {
  source: Source;
  cells: Record<string, number>; // "ageGroup|gender" -> count
  total: number;
}

export interface BreakdownPayload {
  source: Source;
  group: string;
  terms: RankedTerm[];
}

export interface CrossBreakdownPayload {
  source: Source;
  cells: Record<string, RankedTerm[]>;
}

export interface WireEvent {
  event_type: "ADE" | "PTE";
  arguments: Record<string, string[]>;
}

export interface LiveAnnotationPayload {
  model: string;
  events: WireEvent[];
  raw: string;
}

export interface BulkRow {
  line: number;
  sentence: string;
  events?: WireEvent[];
  events_a?: WireEvent[];
  events_b?: WireEvent[];
}

export interface BulkPayload {
  session_id: string;
  model?: string;
  model_a?: string;
  model_b?: string;
  pending: number;
  total: number;
  rows: BulkRow[];
}

export interface ApiError {
  error: string;
  code: number;
  source?: string;
  degraded?: boolean;
  available?: string[];
}
