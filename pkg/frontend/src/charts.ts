/** Pure view-model builders for every chart. All aggregation happened
 * server-side; these only lay numbers out, so displayed totals always equal
 * payload totals. */

import { tierColor } from "./palette.js";
import type { RankedTerm } from "./types.js";

export interface LinePoint {
  year: number;
  count: number;
}

export function yearlySeries(yearly: Record<string, number>): LinePoint[] {
  return Object.entries(yearly)
    .map(([year, count]) => ({ year: Number(year), count }))
    .sort((a, b) => a.year - b.year);
}

export function seriesTotal(series: LinePoint[]): number {
  return series.reduce((sum, p) => sum + p.count, 0);
}

export interface Bar {
  term: string;
  count: number;
  proportion: number;
  tier: number;
  color: string;
}

export interface BarPage {
  page: number; // 1-based, equals the rarity tier of its bars
  bars: Bar[];
}

/** Group ranked terms into their five rarity pages (the tier is the page). */
export function barPages(terms: RankedTerm[]): BarPage[] {
  const pages = new Map<number, Bar[]>();
  for (const t of terms) {
    const bars = pages.get(t.tier) ?? [];
    bars.push({ ...t, color: tierColor(t.tier) });
    pages.set(t.tier, bars);
  }
  return [...pages.entries()]
    .sort(([a], [b]) => a - b)
    .map(([page, bars]) => ({ page, bars }));
}

export interface CloudWord {
  term: string;
  count: number;
  size: number; // px
}

const CLOUD_MIN_PX = 12;
const CLOUD_MAX_PX = 34;

/** Log-scaled font sizes so one dominant term cannot flatten the rest. */
export function wordCloud(terms: RankedTerm[]): CloudWord[] {
  if (terms.length === 0) return [];
  const max = Math.max(...terms.map((t) => t.count));
  const scale = (count: number) =>
    CLOUD_MIN_PX +
    ((CLOUD_MAX_PX - CLOUD_MIN_PX) * Math.log(1 + count)) / Math.log(1 + max);
  return terms.map((t) => ({ term: t.term, count: t.count, size: scale(t.count) }));
}

export interface PieSlice {
  cell: string; // "ageGroup|gender"
  count: number;
  fraction: number;
  startAngle: number; // radians
  endAngle: number;
}

export function pieSlices(cells: Record<string, number>): PieSlice[] {
  const entries = Object.entries(cells).sort(
    (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
  );
  const total = entries.reduce((sum, [, count]) => sum + count, 0);
  if (total === 0) return [];
  let angle = 0;
  return entries.map(([cell, count]) => {
    const fraction = count / total;
    const slice = {
      cell,
      count,
      fraction,
      startAngle: angle,
      endAngle: angle + fraction * 2 * Math.PI,
    };
    angle = slice.endAngle;
    return slice;
  });
}

export interface CrossTab {
  ageGroups: string[];
  genders: string[];
  cells: Map<string, RankedTerm[]>;
}

const AGE_ORDER = ["neonate", "infant", "child", "adolescent", "adult", "elderly", "unknown"];
const GENDER_ORDER = ["male", "female", "unknown"];

export function crossTab(cells: Record<string, RankedTerm[]>): CrossTab {
  const ageGroups = new Set<string>();
  const genders = new Set<string>();
  const map = new Map<string, RankedTerm[]>();
  for (const [key, terms] of Object.entries(cells)) {
    const [age, gender] = key.split("|");
    ageGroups.add(age);
    genders.add(gender);
    map.set(key, terms);
  }
  const order = (ref: string[]) => (a: string, b: string) =>
    ref.indexOf(a) - ref.indexOf(b);
  return {
    ageGroups: [...ageGroups].sort(order(AGE_ORDER)),
    genders: [...genders].sort(order(GENDER_ORDER)),
    cells: map,
  };
}
