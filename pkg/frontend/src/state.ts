/** Search state: URL serialization, the five-entry search history, and the
 * theme toggle. The URL query is the single source of truth for a view, so
 * any rendered search is shareable and reload-stable. */

import type { Source, TermKind } from "./types.js";

export interface SearchState {
  kind: TermKind;
  terms: string[];
  cofilter: string[];
  gender?: "male" | "female";
  age?: number;
  ageGroup?: string;
  yearFrom?: number;
  yearTo?: number;
  source: Source;
}

export const DEFAULT_STATE: SearchState = {
  kind: "drug",
  terms: [],
  cofilter: [],
  source: "pubmed",
};

export function toQuery(state: SearchState): string {
  const params = new URLSearchParams();
  params.set("kind", state.kind);
  for (const term of state.terms) params.append("term", term);
  for (const term of state.cofilter) params.append("cofilter", term);
  if (state.gender) params.set("gender", state.gender);
  if (state.age !== undefined) params.set("age", String(state.age));
  if (state.ageGroup) params.set("age_group", state.ageGroup);
  if (state.yearFrom !== undefined) params.set("year_from", String(state.yearFrom));
  if (state.yearTo !== undefined) params.set("year_to", String(state.yearTo));
  if (state.source !== "pubmed") params.set("source", state.source);
  return params.toString();
}

export function fromQuery(query: string): SearchState {
  const params = new URLSearchParams(query);
  const state: SearchState = {
    kind: params.get("kind") === "effect" ? "effect" : "drug",
    terms: params.getAll("term"),
    cofilter: params.getAll("cofilter"),
    source: params.get("source") === "faers" ? "faers" : "pubmed",
  };
  const gender = params.get("gender");
  if (gender === "male" || gender === "female") state.gender = gender;
  const age = params.get("age");
  if (age !== null && age !== "" && !Number.isNaN(Number(age))) state.age = Number(age);
  const ageGroup = params.get("age_group");
  if (ageGroup) state.ageGroup = ageGroup;
  const yearFrom = params.get("year_from");
  if (yearFrom !== null && yearFrom !== "") state.yearFrom = Number(yearFrom);
  const yearTo = params.get("year_to");
  if (yearTo !== null && yearTo !== "") state.yearTo = Number(yearTo);
  return state;
}

// ---------------------------------------------------------------------------
// Search history: last five distinct searches, most recent first.

const HISTORY_KEY = "ademiner.history";
const HISTORY_LIMIT = 5;

export interface HistoryStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export function loadHistory(store: HistoryStore): string[] {
  try {
    const raw = store.getItem(HISTORY_KEY);
    const parsed = raw ? JSON.parse(raw) : [];
    return Array.isArray(parsed) ? parsed.filter((x) => typeof x === "string") : [];
  } catch {
    return [];
  }
}

export function pushHistory(store: HistoryStore, state: SearchState): string[] {
  const entry = toQuery(state);
  const history = [entry, ...loadHistory(store).filter((h) => h !== entry)];
  const capped = history.slice(0, HISTORY_LIMIT);
  store.setItem(HISTORY_KEY, JSON.stringify(capped));
  return capped;
}

// ---------------------------------------------------------------------------
// Theme

const THEME_KEY = "ademiner.theme";
export type Theme = "bright" | "dark";

export function loadTheme(store: HistoryStore): Theme {
  return store.getItem(THEME_KEY) === "dark" ? "dark" : "bright";
}

export function saveTheme(store: HistoryStore, theme: Theme): void {
  store.setItem(THEME_KEY, theme);
}
