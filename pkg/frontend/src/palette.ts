/** Fixed role -> color palette shared by the live and bulk annotation views.
 * One config object so the two views can never drift apart. */

export const ROLE_COLORS: Record<string, string> = {
  subject: "#4e79a7",
  "subject.age": "#76b7b2",
  "subject.gender": "#59a14f",
  "subject.race": "#8cd17d",
  "subject.population": "#86bcb6",
  "subject.disorder": "#499894",
  treatment: "#f28e2b",
  "treatment.drug": "#e15759",
  "treatment.dosage": "#ff9d9a",
  "treatment.route": "#fabfd2",
  "treatment.frequency": "#d37295",
  "treatment.duration": "#b6992d",
  "treatment.time_elapsed": "#f1ce63",
  "treatment.disorder": "#d4a6c8",
  "treatment.combination": "#9d7660",
  effect: "#b07aa1",
};

export const FALLBACK_COLOR = "#bab0ac";

/** Rarity tints for the five bar-chart pages, common to rare. */
export const TIER_COLORS = ["#1b7837", "#7fbf7b", "#d9f0d3", "#e7d4e8", "#af8dc3"];

export function roleColor(role: string): string {
  return ROLE_COLORS[role] ?? FALLBACK_COLOR;
}

export function tierColor(tier: number): string {
  return TIER_COLORS[Math.min(Math.max(tier, 1), 5) - 1];
}
