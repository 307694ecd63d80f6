/** DOM renderers. Everything here is payload-in, elements-out; handlers are
 * injected so tests can observe interactions without a real server. */

import {
  barPages,
  crossTab,
  pieSlices,
  seriesTotal,
  wordCloud,
  yearlySeries,
} from "./charts.js";
import { segmentize, toPieces, exportJson, compareRows } from "./annotate.js";
import type {
  ArticlesPayload,
  BulkPayload,
  CrossBreakdownPayload,
  DemographicsPayload,
  LiveAnnotationPayload,
  RankedTerm,
  SearchPayload,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface SearchHandlers {
  /** A click on a bar or cloud term drills down: cofiltered articles plus
   * that term's demographics panel. */
  onTermClick(term: string): void;
  onRetryFaers?(): void;
}

export function renderYearlyChart(payload: SearchPayload): SVGSVGElement {
  const series = yearlySeries(payload.yearly);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "yearly-chart");
  svg.setAttribute("viewBox", "0 0 400 120");
  svg.setAttribute("data-total", String(seriesTotal(series)));
  if (series.length === 0) return svg;
  const maxCount = Math.max(...series.map((p) => p.count));
  const minYear = series[0].year;
  const span = Math.max(series[series.length - 1].year - minYear, 1);
  const points = series
    .map((p) => {
      const x = 10 + (380 * (p.year - minYear)) / span;
      const y = 110 - (100 * p.count) / Math.max(maxCount, 1);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("points", points);
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#4e79a7");
  svg.appendChild(line);
  for (const p of series) {
    const x = 10 + (380 * (p.year - minYear)) / span;
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", x.toFixed(1));
    dot.setAttribute("cy", (110 - (100 * p.count) / Math.max(maxCount, 1)).toFixed(1));
    dot.setAttribute("r", "3");
    dot.setAttribute("data-year", String(p.year));
    dot.setAttribute("data-count", String(p.count));
    svg.appendChild(dot);
  }
  return svg;
}

export function renderBarChart(
  terms: RankedTerm[],
  handlers: SearchHandlers,
  page = 1,
): HTMLElement {
  const pages = barPages(terms);
  const container = el("div", "bar-chart");
  container.dataset.pages = String(pages.length);
  const active = pages.find((p) => p.page === page) ?? pages[0];
  if (!active) return container;
  container.dataset.page = String(active.page);
  const maxCount = Math.max(...active.bars.map((b) => b.count));
  for (const bar of active.bars) {
    const row = el("div", "bar-row");
    const label = el("span", "bar-label", bar.term);
    const rect = el("div", "bar-rect");
    rect.style.width = `${(100 * bar.count) / maxCount}%`;
    rect.style.backgroundColor = bar.color;
    rect.dataset.term = bar.term;
    rect.dataset.count = String(bar.count);
    rect.dataset.tier = String(bar.tier);
    rect.title = `${bar.count} (${(100 * bar.proportion).toFixed(1)}%)`;
    rect.addEventListener("click", () => handlers.onTermClick(bar.term));
    row.append(label, rect);
    container.appendChild(row);
  }
  return container;
}

export function renderWordCloud(
  terms: RankedTerm[],
  handlers: SearchHandlers,
): HTMLElement {
  const cloud = el("div", "word-cloud");
  for (const word of wordCloud(terms)) {
    const span = el("span", "cloud-term", word.term);
    span.style.fontSize = `${word.size.toFixed(1)}px`;
    span.dataset.count = String(word.count);
    span.addEventListener("click", () => handlers.onTermClick(word.term));
    cloud.appendChild(span);
  }
  return cloud;
}

export function renderArticles(payload: ArticlesPayload): HTMLElement {
  const list = el("div", "article-list");
  list.dataset.total = String(payload.total);
  for (const article of payload.articles) {
    const card = el("article", "article-card");
    const title = el("h3");
    const link = el("a", undefined, article.title || article.pmid);
    link.setAttribute("href", article.link);
    title.appendChild(link);
    card.appendChild(title);
    if (article.year !== null) card.appendChild(el("span", "article-year", String(article.year)));

    const abstract = el("p", "article-abstract");
    let pos = 0;
    for (const [start, end] of article.highlights) {
      if (start > pos) abstract.append(article.abstract.slice(pos, start));
      const mark = el("mark", undefined, article.abstract.slice(start, end));
      abstract.appendChild(mark);
      pos = end;
    }
    abstract.append(article.abstract.slice(pos));
    card.appendChild(abstract);
    if (article.keywords.length) {
      card.appendChild(el("p", "article-keywords", article.keywords.join(", ")));
    }
    list.appendChild(card);
  }
  return list;
}

export function renderSearchResults(
  search: SearchPayload,
  articles: ArticlesPayload,
  handlers: SearchHandlers,
): HTMLElement {
  const root = el("section", "search-results");
  const total = el("p", "result-total", `${search.total} matching reports`);
  total.dataset.total = String(search.total);
  root.appendChild(total);
  root.appendChild(renderYearlyChart(search));
  root.appendChild(renderBarChart(search.top_terms, handlers));
  root.appendChild(renderWordCloud(search.top_terms, handlers));
  root.appendChild(renderArticles(articles));
  return root;
}

export function renderDegradedPanel(
  source: string,
  handlers: SearchHandlers,
): HTMLElement {
  const panel = el("div", "panel degraded");
  panel.dataset.source = source;
  panel.appendChild(el("p", undefined, `${source} data is temporarily unavailable`));
  const retry = el("button", "retry", "Retry");
  retry.addEventListener("click", () => handlers.onRetryFaers?.());
  panel.appendChild(retry);
  return panel;
}

export function renderDemographics(payload: DemographicsPayload): HTMLElement {
  const root = el("section", "demographics");
  root.dataset.total = String(payload.total);
  root.appendChild(el("p", "demo-total", `${payload.total} reports`));
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "-1.1 -1.1 2.2 2.2");
  svg.setAttribute("class", "demo-pie");
  for (const slice of pieSlices(payload.cells)) {
    const path = document.createElementNS(SVG_NS, "path");
    const large = slice.endAngle - slice.startAngle > Math.PI ? 1 : 0;
    const x0 = Math.cos(slice.startAngle);
    const y0 = Math.sin(slice.startAngle);
    const x1 = Math.cos(slice.endAngle);
    const y1 = Math.sin(slice.endAngle);
    path.setAttribute(
      "d",
      `M 0 0 L ${x0.toFixed(4)} ${y0.toFixed(4)} A 1 1 0 ${large} 1 ${x1.toFixed(4)} ${y1.toFixed(4)} Z`,
    );
    path.setAttribute("data-cell", slice.cell);
    path.setAttribute("data-count", String(slice.count));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${slice.cell}: ${slice.count} (${(100 * slice.fraction).toFixed(1)}%)`;
    path.appendChild(title);
    svg.appendChild(path);
  }
  root.appendChild(svg);
  return root;
}

export function renderCrossBreakdown(payload: CrossBreakdownPayload): HTMLElement {
  const table = el("table", "cross-breakdown");
  const grid = crossTab(payload.cells);
  const head = el("tr");
  head.appendChild(el("th"));
  for (const gender of grid.genders) head.appendChild(el("th", undefined, gender));
  table.appendChild(head);
  for (const age of grid.ageGroups) {
    const row = el("tr");
    row.appendChild(el("th", undefined, age));
    for (const gender of grid.genders) {
      const cell = el("td");
      cell.dataset.cell = `${age}|${gender}`;
      for (const term of grid.cells.get(`${age}|${gender}`) ?? []) {
        cell.appendChild(el("div", "cell-term", `${term.term} (${term.count})`));
      }
      row.appendChild(cell);
    }
    table.appendChild(row);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Annotation workspace

export function renderAnnotatedSentence(
  sentence: string,
  payload: LiveAnnotationPayload,
): HTMLElement {
  const root = el("div", "annotated");
  const line = el("p", "annotated-sentence");
  const segments = segmentize(sentence, payload.events);
  for (const piece of toPieces(sentence, segments)) {
    if (!piece.segment) {
      line.append(piece.text);
      continue;
    }
    const span = el("span", "role-segment", piece.text);
    span.style.backgroundColor = piece.segment.color;
    span.dataset.role = piece.segment.role;
    span.dataset.span = piece.segment.span;
    span.title = piece.segment.role;
    line.appendChild(span);
  }
  root.appendChild(line);
  const raw = el("pre", "raw-json", exportJson(payload.events));
  raw.dataset.copy = "true";
  root.appendChild(raw);
  return root;
}

export function renderComparison(payload: BulkPayload): HTMLElement {
  const table = el("table", "comparison");
  table.dataset.total = String(payload.total);
  const head = el("tr");
  head.appendChild(el("th", undefined, "#"));
  head.appendChild(el("th", undefined, payload.model_a ?? "model A"));
  head.appendChild(el("th", undefined, payload.model_b ?? "model B"));
  table.appendChild(head);
  for (const row of compareRows(payload.rows)) {
    const tr = el("tr", "compare-row");
    tr.appendChild(el("td", undefined, String(row.line)));
    for (const segments of [row.left, row.right]) {
      const td = el("td", "compare-cell");
      const p = el("p");
      for (const piece of toPieces(row.sentence, segments)) {
        if (!piece.segment) {
          p.append(piece.text);
          continue;
        }
        const span = el("span", "role-segment", piece.text);
        span.style.backgroundColor = piece.segment.color;
        span.dataset.role = piece.segment.role;
        p.appendChild(span);
      }
      td.appendChild(p);
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  return table;
}
