import { describe, expect, it } from "vitest";

import { renderArticles } from "../src/render.js";
import type { ArticlesPayload } from "../src/types.js";
import { payloads } from "./helpers.js";

const articles = payloads.articles as ArticlesPayload;
const QUERY_TERMS = ["vancomycin", "liver failure"];

describe("highlight fidelity", () => {
  it("every highlighted substring equals a query term case-insensitively", () => {
    const list = renderArticles(articles);
    const marks = [...list.querySelectorAll("mark")];
    expect(marks.length).toBeGreaterThan(0);
    for (const mark of marks) {
      const text = (mark.textContent ?? "").toLowerCase();
      expect(QUERY_TERMS).toContain(text);
    }
  });

  it("reassembling marked and plain text reproduces the abstract", () => {
    const list = renderArticles(articles);
    const rendered = [...list.querySelectorAll(".article-abstract")].map(
      (p) => p.textContent,
    );
    expect(rendered).toEqual(articles.articles.map((a) => a.abstract));
  });

  it("an article matched without a verbatim occurrence renders unmarked", () => {
    const payload: ArticlesPayload = {
      total: 1,
      articles: [{
        pmid: "900",
        title: "t",
        abstract: "A 30-year-old man developed rash after paracetamol.",
        keywords: [],
        year: 2020,
        link: "https://pubmed.ncbi.nlm.nih.gov/900/",
        highlights: [],
      }],
    };
    const list = renderArticles(payload);
    expect(list.querySelectorAll(".article-card")).toHaveLength(1);
    expect(list.querySelectorAll("mark")).toHaveLength(0);
  });
});
