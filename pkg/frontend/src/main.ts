/** Application wiring: URL-driven search, drill-down, source toggle,
 * history, and theme. The App class owns no analytics; it fetches payloads
 * and hands them to the renderers. */

import { ApiClient, ApiRequestError, SequenceGate } from "./api.js";
import {
  renderComparison,
  renderCrossBreakdown,
  renderDegradedPanel,
  renderDemographics,
  renderSearchResults,
} from "./render.js";
import {
  DEFAULT_STATE,
  fromQuery,
  loadTheme,
  pushHistory,
  saveTheme,
  toQuery,
  type HistoryStore,
  type SearchState,
  type Theme,
} from "./state.js";

export class App {
  readonly state: SearchState;
  private readonly gate = new SequenceGate();
  theme: Theme;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly storage: HistoryStore,
    initialQuery = "",
  ) {
    this.state = initialQuery ? fromQuery(initialQuery) : { ...DEFAULT_STATE };
    this.theme = loadTheme(storage);
  }

  /** Run the current search and render the results page. */
  async runSearch(): Promise<void> {
    if (this.state.terms.length === 0) return;
    const query = toQuery(this.state);
    pushHistory(this.storage, this.state);
    const ticket = this.gate.issue();
    try {
      const [search, articles] = await Promise.all([
        this.api.search(query),
        this.state.source === "pubmed"
          ? this.api.articles(query)
          : Promise.resolve({ total: 0, articles: [] }),
      ]);
      if (!this.gate.isCurrent(ticket)) return; // stale: a newer search won
      this.root.replaceChildren(
        renderSearchResults(search, articles, {
          onTermClick: (term) => void this.drillDown(term),
          onRetryFaers: () => void this.runSearch(),
        }),
      );
    } catch (error) {
      if (!this.gate.isCurrent(ticket)) return;
      if (error instanceof ApiRequestError && error.degraded) {
        this.root.replaceChildren(
          renderDegradedPanel("faers", {
            onTermClick: () => undefined,
            onRetryFaers: () => void this.runSearch(),
          }),
        );
        return;
      }
      throw error;
    }
  }

  /** Bar/cloud click: articles cofiltered by the clicked term plus the
   * term's own demographics panel, without losing the current results. */
  async drillDown(term: string): Promise<void> {
    const cofiltered: SearchState = {
      ...this.state,
      cofilter: [...this.state.cofilter, term],
    };
    const oppositeKind = this.state.kind === "drug" ? "effect" : "drug";
    const termQuery = toQuery({
      ...DEFAULT_STATE,
      kind: oppositeKind,
      terms: [term],
      source: this.state.source,
    });
    const [articles, demographics] = await Promise.all([
      this.api.articles(toQuery(cofiltered)),
      this.api.demographics(termQuery),
    ]);
    const panel = document.createElement("div");
    panel.className = "drilldown-panel";
    panel.dataset.term = term;
    panel.appendChild(renderDemographics(demographics));
    const list = document.createElement("div");
    list.className = "drilldown-articles";
    list.dataset.total = String(articles.total);
    panel.appendChild(list);
    this.root.appendChild(panel);
  }

  async showCrossBreakdown(k = 10): Promise<void> {
    const payload = await this.api.crossBreakdown(toQuery(this.state) + `&k=${k}`);
    this.root.appendChild(renderCrossBreakdown(payload));
  }

  async showComparison(sid: string, modelA: string, modelB: string): Promise<void> {
    const payload = await this.api.bulkCompare(sid, {
      model_a: modelA,
      model_b: modelB,
      page_size: 100,
    });
    this.root.appendChild(renderComparison(payload));
  }

  toggleTheme(): Theme {
    this.theme = this.theme === "bright" ? "dark" : "bright";
    saveTheme(this.storage, this.theme);
    document.body.dataset.theme = this.theme;
    return this.theme;
  }

  toggleSource(): void {
    this.state.source = this.state.source === "pubmed" ? "faers" : "pubmed";
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const app = new App(
    root,
    new ApiClient(""),
    window.localStorage,
    window.location.search.replace(/^\?/, ""),
  );
  document.body.dataset.theme = app.theme;
  void app.runSearch();
}

if (typeof window !== "undefined" && "document" in globalThis) {
  const auto = document.getElementById("app");
  if (auto && auto.dataset.autoboot !== "off") boot();
}
