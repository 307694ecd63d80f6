"""Case-report corpus ingestion and sentence splitting.

The corpus file is UTF-8, one flat JSON object per line with keys ``pmid``,
``title``, ``abstract``, ``year``, ``keywords``, ``language``, ``pub_types``;
unknown keys are ignored. Ingestion keeps English case reports that have an
abstract, rejects duplicates (first occurrence wins), and optionally requires
an adverse-event keyword in the title, abstract, or keywords for corpora that
were not pre-filtered at retrieval time.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class CaseReport:
    pmid: str
    title: str
    abstract: str
    pub_year: int
    keywords: list[str] = field(default_factory=list)
    language: str = "en"
    pub_types: list[str] = field(default_factory=list)


@dataclass
class ParseReport:
    accepted: int = 0
    rejected: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)  # (line no, reason)


ENGLISH_CODES = {"en", "eng"}
CASE_REPORT_TYPE = "case reports"
ADE_KEYWORDS = ("adverse event", "adverse effect", "adverse reaction", "side effect")


def _has_ade_keyword(obj: dict) -> bool:
    text = " ".join(
        [str(obj.get("title", "")), str(obj.get("abstract", ""))]
        + [str(k) for k in obj.get("keywords", ())]
    ).lower()
    return any(kw in text for kw in ADE_KEYWORDS)


def parse_corpus(
    lines: Iterable[str], require_ade_keywords: bool = False
) -> tuple[list[CaseReport], ParseReport]:
    """Parse and filter corpus lines, preserving input order.

    A malformed line is reported with its line number and skipped; the
    later of two records sharing a pmid is rejected.
    """
    reports: list[CaseReport] = []
    seen: set[str] = set()
    stats = ParseReport()

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            pmid = str(obj["pmid"]).strip()
            if not pmid:
                raise ValueError("empty pmid")
            year = int(obj["year"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            stats.rejected += 1
            stats.errors.append((lineno, f"malformed record: {exc}"))
            continue

        if pmid in seen:
            stats.rejected += 1
            stats.errors.append((lineno, f"duplicate pmid {pmid}"))
            continue
        language = str(obj.get("language", "")).lower()
        pub_types = [str(t) for t in obj.get("pub_types", ())]
        abstract = str(obj.get("abstract", "") or "")
        if language not in ENGLISH_CODES:
            stats.rejected += 1
            stats.errors.append((lineno, f"language {language or 'missing'!r} is not English"))
            continue
        if CASE_REPORT_TYPE not in (t.lower() for t in pub_types):
            stats.rejected += 1
            stats.errors.append((lineno, "not a case report"))
            continue
        if not abstract.strip():
            stats.rejected += 1
            stats.errors.append((lineno, "missing abstract"))
            continue
        if not 1800 <= year <= 2100:
            stats.rejected += 1
            stats.errors.append((lineno, f"implausible year {year}"))
            continue
        if require_ade_keywords and not _has_ade_keyword(obj):
            stats.rejected += 1
            stats.errors.append((lineno, "no adverse-event keyword"))
            continue

        seen.add(pmid)
        stats.accepted += 1
        reports.append(
            CaseReport(
                pmid=pmid,
                title=str(obj.get("title", "")),
                abstract=abstract,
                pub_year=year,
                keywords=[str(k) for k in obj.get("keywords", ())],
                language=language,
                pub_types=pub_types,
            )
        )
    return reports, stats


# ---------------------------------------------------------------------------
# Sentence splitting


@dataclass(frozen=True)
class Sentence:
    pmid: str
    index: int
    text: str
    start: int
    end: int  # char span [start, end) into the abstract


# Never split right after these (the terminator is part of the abbreviation).
ABBREVIATIONS = ("e.g.", "i.e.", "vs.", "Dr.", "Fig.", "et al.")

_BOUNDARY = re.compile(r"[.!?](\s+)[A-Z0-9]")


def split_sentences(abstract: str, pmid: str = "") -> list[Sentence]:
    """Split after '.', '!' or '?' followed by whitespace and an uppercase
    letter or digit, except inside the abbreviation allowlist. Joining the
    sentence texts with the original inter-sentence whitespace reconstructs
    the abstract exactly; the whole text is one sentence when no boundary
    matches."""
    cuts: list[tuple[int, int]] = []  # (sentence end, next sentence start)
    for m in _BOUNDARY.finditer(abstract):
        end = m.start() + 1
        if any(abstract.endswith(abbr, 0, end) for abbr in ABBREVIATIONS):
            continue
        cuts.append((end, m.end() - 1))

    sentences: list[Sentence] = []
    start = 0
    for end, next_start in cuts:
        if end <= start:
            continue
        sentences.append(Sentence(pmid, len(sentences), abstract[start:end], start, end))
        start = next_start
    if start < len(abstract) or not sentences:
        sentences.append(
            Sentence(pmid, len(sentences), abstract[start:], start, len(abstract))
        )
    return sentences
