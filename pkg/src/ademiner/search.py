"""In-memory faceted search and statistics over normalized event records.

The index is immutable once built: postings per term kind (drug, effect),
the record list, and a per-term year histogram. Queries match records by
term, optional opposite-kind cofilter, demographics, and year range; all
statistics views (yearly counts, ranked co-occurring terms, demographic
distribution and its breakdowns) are computed over the matched articles.

Articles, not records, are the unit every statistic counts: a record is one
(article, drug) pair, and an article matching through two drugs still counts
once. Ordering is total — year descending, then pmid ascending, unknown
years last.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from math import ceil
from typing import Iterable, Sequence

from .normalize import AgeValue, Gender, normalize_term
from .records import NormalizedEventRecord, record_to_line


class AgeGroup(Enum):
    NEONATE = "neonate"
    INFANT = "infant"
    CHILD = "child"
    ADOLESCENT = "adolescent"
    ADULT = "adult"
    ELDERLY = "elderly"
    UNKNOWN = "unknown"


_DAYS_28 = 28.0 / 365.0

# Half-open [lo, hi) group boundaries in years; they partition [0, inf).
AGE_GROUP_BOUNDS: list[tuple[AgeGroup, float, float]] = [
    (AgeGroup.NEONATE, 0.0, _DAYS_28),
    (AgeGroup.INFANT, _DAYS_28, 2.0),
    (AgeGroup.CHILD, 2.0, 12.0),
    (AgeGroup.ADOLESCENT, 12.0, 18.0),
    (AgeGroup.ADULT, 18.0, 65.0),
    (AgeGroup.ELDERLY, 65.0, float("inf")),
]


def age_group(age: AgeValue) -> AgeGroup:
    """Bucket an age value. An exact value lands in the group containing it;
    a range maps to a group only when entirely contained in it, otherwise
    unknown (partial overlap is not guessed at)."""
    if age.kind == "unknown":
        return AgeGroup.UNKNOWN
    for group, lo, hi in AGE_GROUP_BOUNDS:
        if age.kind == "exact":
            if lo <= age.years_lo < hi:
                return group
        else:
            upper_ok = age.years_hi <= hi if age.hi_open else age.years_hi < hi
            if lo <= age.years_lo and upper_ok:
                return group
    return AgeGroup.UNKNOWN


@dataclass
class QuerySpec:
    """One search: term kind, OR-ed terms, optional opposite-kind cofilter
    (AND), demographic filters, and a year range. Terms are canonicalized on
    construction so matching is by canonical string equality."""

    kind: str  # "drug" | "effect"
    terms: list[str]
    cofilter: list[str] = field(default_factory=list)
    age_exact: float | None = None
    age_group: AgeGroup | None = None
    gender: Gender | None = None
    year_range: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in ("drug", "effect"):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if not self.terms:
            raise ValueError("terms must be non-empty")
        if self.age_exact is not None and self.age_group is not None:
            raise ValueError("exact-age and age-group filters are mutually exclusive")
        self.terms = [normalize_term(t, self.kind) for t in self.terms]
        other = "effect" if self.kind == "drug" else "drug"
        self.cofilter = [normalize_term(t, other) for t in self.cofilter]


class IndexBuildError(ValueError):
    pass


@dataclass
class Index:
    records: list[NormalizedEventRecord]
    postings: dict[str, dict[str, list[int]]]  # kind -> term -> sorted record ids
    year_histogram: dict[str, dict[str, dict[int, int]]]  # kind -> term -> year -> n
    build_stamp: str

    def terms(self, kind: str) -> list[str]:
        return sorted(self.postings[kind])

    def term_record_count(self, kind: str, term: str) -> int:
        return len(self.postings[kind].get(term, ()))


def build_index(records: Sequence[NormalizedEventRecord]) -> Index:
    """Build the immutable index; duplicate (pmid, drug) pairs are a build
    error. Identical record sets build identical indexes, including the
    content-hash build stamp."""
    seen: set[tuple[str, str]] = set()
    postings: dict[str, dict[str, list[int]]] = {"drug": {}, "effect": {}}
    histogram: dict[str, dict[str, dict[int, int]]] = {"drug": {}, "effect": {}}
    digest = hashlib.sha1()

    for rid, record in enumerate(records):
        key = (record.pmid, record.drug)
        if key in seen:
            raise IndexBuildError(f"duplicate (pmid, drug) pair {key!r}")
        seen.add(key)
        digest.update(record_to_line(record).encode("utf-8"))
        digest.update(b"\n")

        for kind, terms in (("drug", [record.drug]), ("effect", sorted(record.effects))):
            for term in terms:
                postings[kind].setdefault(term, []).append(rid)
                if record.year is not None:
                    bucket = histogram[kind].setdefault(term, {})
                    bucket[record.year] = bucket.get(record.year, 0) + 1

    return Index(
        records=list(records),
        postings=postings,
        year_histogram=histogram,
        build_stamp=digest.hexdigest(),
    )


def _record_terms(record: NormalizedEventRecord, kind: str) -> set[str]:
    return {record.drug} if kind == "drug" else set(record.effects)


def _matches(record: NormalizedEventRecord, q: QuerySpec) -> bool:
    if not _record_terms(record, q.kind) & set(q.terms):
        return False
    other = "effect" if q.kind == "drug" else "drug"
    if q.cofilter and not _record_terms(record, other) & set(q.cofilter):
        return False
    if q.age_exact is not None and not record.age.contains(q.age_exact):
        return False
    if q.age_group is not None and age_group(record.age) != q.age_group:
        return False
    if q.gender is not None and record.gender != q.gender:
        return False
    if q.year_range is not None:
        if record.year is None or not q.year_range[0] <= record.year <= q.year_range[1]:
            return False
    return True


def _matched_ids(index: Index, q: QuerySpec) -> list[int]:
    candidates: set[int] = set()
    for term in q.terms:
        candidates.update(index.postings[q.kind].get(term, ()))
    return [rid for rid in sorted(candidates) if _matches(index.records[rid], q)]


def _matched_articles(index: Index, q: QuerySpec) -> list[tuple[str, list[int]]]:
    """Matched records grouped by pmid, ordered year desc then pmid asc
    (unknown year last). The record ids per pmid stay ascending."""
    groups: dict[str, list[int]] = {}
    for rid in _matched_ids(index, q):
        groups.setdefault(index.records[rid].pmid, []).append(rid)

    def sort_key(pmid: str) -> tuple[int, int, str]:
        year = index.records[groups[pmid][0]].year
        return (1, 0, pmid) if year is None else (0, -year, pmid)

    return [(pmid, groups[pmid]) for pmid in sorted(groups, key=sort_key)]


def search_articles(index: Index, q: QuerySpec) -> list[str]:
    """Matching article ids, deduplicated, year descending then pmid
    ascending."""
    return [pmid for pmid, _rids in _matched_articles(index, q)]


def yearly_counts(index: Index, q: QuerySpec) -> dict[int, int]:
    """Matched articles per publication year; articles with no year are
    omitted, so the counts sum to the matched articles with a known year."""
    out: dict[int, int] = {}
    for _pmid, rids in _matched_articles(index, q):
        year = index.records[rids[0]].year
        if year is not None:
            out[year] = out.get(year, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class RankedTerm:
    term: str
    count: int
    proportion: float  # share of the full co-occurrence mass, sums to 1
    rarity_tier: int  # 1 (common) .. 5 (rare): page in the 5-page cut


def _cooccurrence_counts(
    index: Index, articles: Iterable[tuple[str, list[int]]], kind: str
) -> dict[str, int]:
    counts: dict[str, int] = {}
    other = "effect" if kind == "drug" else "drug"
    for _pmid, rids in articles:
        terms: set[str] = set()
        for rid in rids:
            terms |= _record_terms(index.records[rid], other)
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
    return counts


def _rank(counts: dict[str, int], n: int | None) -> list[RankedTerm]:
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = sum(counts.values())
    if n is not None:
        ordered = ordered[:n]
    if not ordered:
        return []
    page = ceil(len(ordered) / 5)
    return [
        RankedTerm(term, count, count / total, i // page + 1)
        for i, (term, count) in enumerate(ordered)
    ]


def top_cooccurring(index: Index, q: QuerySpec, n: int = 50) -> list[RankedTerm]:
    """Top-n opposite-kind terms over the matched articles, count descending
    with alphabetical tie-break. The proportion denominator is the full
    (untruncated) co-occurrence mass; the rarity tier is the term's page when
    the returned list is cut into 5 pages."""
    articles = _matched_articles(index, q)
    return _rank(_cooccurrence_counts(index, articles, q.kind), n)


def demographic_distribution(
    index: Index, q: QuerySpec
) -> dict[tuple[AgeGroup, Gender], int]:
    """Matched articles partitioned by (age group, gender); cell counts sum
    to the matched article count."""
    out: dict[tuple[AgeGroup, Gender], int] = {}
    for _pmid, rids in _matched_articles(index, q):
        record = index.records[rids[0]]
        cell = (age_group(record.age), record.gender)
        out[cell] = out.get(cell, 0) + 1
    return out


def group_breakdown(
    index: Index, q: QuerySpec, group: AgeGroup | Gender, n: int = 10
) -> list[RankedTerm]:
    """top_cooccurring restricted to matched articles in one age or gender
    group."""
    articles = _matched_articles(index, q)
    if isinstance(group, AgeGroup):
        articles = [
            (pmid, rids)
            for pmid, rids in articles
            if age_group(index.records[rids[0]].age) == group
        ]
    else:
        articles = [
            (pmid, rids)
            for pmid, rids in articles
            if index.records[rids[0]].gender == group
        ]
    return _rank(_cooccurrence_counts(index, articles, q.kind), n)


def cross_breakdown(
    index: Index, q: QuerySpec, k: int = 10
) -> dict[tuple[AgeGroup, Gender], list[RankedTerm]]:
    """group_breakdown applied per cell of the demographic partition."""
    cells: dict[tuple[AgeGroup, Gender], list[tuple[str, list[int]]]] = {}
    for pmid, rids in _matched_articles(index, q):
        record = index.records[rids[0]]
        cell = (age_group(record.age), record.gender)
        cells.setdefault(cell, []).append((pmid, rids))
    return {
        cell: _rank(_cooccurrence_counts(index, articles, q.kind), k)
        for cell, articles in cells.items()
    }


def suggest_terms(index: Index, kind: str, prefix: str, limit: int = 10) -> list[str]:
    """Index terms of a kind starting with the cleaned prefix, ranked by
    record count descending then term ascending."""
    if kind not in ("drug", "effect"):
        raise ValueError(f"unknown term kind {kind!r}")
    cleaned = " ".join(prefix.lower().split())
    hits = [t for t in index.postings[kind] if t.startswith(cleaned)]
    hits.sort(key=lambda t: (-index.term_record_count(kind, t), t))
    return hits[:limit]
