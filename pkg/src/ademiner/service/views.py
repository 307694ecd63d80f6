"""Payload builders shared by the API routes: article views with highlight
spans, demographic cell serialization, and conversion of spontaneous-report
counts onto the shared age-group axes."""

from __future__ import annotations

from ..corpus import CaseReport
from ..faers import FaersClient, FaersCountResult, FaersQuery
from ..normalize import AgeValue, Gender
from ..search import AGE_GROUP_BOUNDS, AgeGroup, RankedTerm, age_group

PUBMED_LINK = "https://pubmed.ncbi.nlm.nih.gov/{pmid}/"


def highlight_spans(abstract: str, terms: list[str]) -> list[tuple[int, int]]:
    """Non-overlapping [start, end) spans of case-insensitive term
    occurrences, longer terms taking precedence."""
    lower = abstract.lower()
    raw: list[tuple[int, int]] = []
    for term in sorted({t.lower() for t in terms if t}, key=lambda t: (-len(t), t)):
        start = 0
        while True:
            i = lower.find(term, start)
            if i < 0:
                break
            raw.append((i, i + len(term)))
            start = i + len(term)
    raw.sort(key=lambda se: (se[0], se[0] - se[1]))
    chosen: list[tuple[int, int]] = []
    last_end = -1
    for s, e in raw:
        if s >= last_end:
            chosen.append((s, e))
            last_end = e
    return chosen


def article_view(report: CaseReport | None, pmid: str, terms: list[str]) -> dict:
    if report is None:
        return {
            "pmid": pmid,
            "title": "",
            "abstract": "",
            "keywords": [],
            "year": None,
            "link": PUBMED_LINK.format(pmid=pmid),
            "highlights": [],
        }
    return {
        "pmid": report.pmid,
        "title": report.title,
        "abstract": report.abstract,
        "keywords": report.keywords,
        "year": report.pub_year,
        "link": PUBMED_LINK.format(pmid=report.pmid),
        "highlights": [list(se) for se in highlight_spans(report.abstract, terms)],
    }


def cell_key(group: AgeGroup, gender: Gender) -> str:
    return f"{group.value}|{gender.value}"


def ranked_terms_payload(terms: list[RankedTerm]) -> list[dict]:
    return [
        {"term": t.term, "count": t.count, "proportion": t.proportion, "tier": t.rarity_tier}
        for t in terms
    ]


def rank_counts(counts: list[tuple[str, int]], n: int | None) -> list[RankedTerm]:
    """Rank externally sourced (term, count) pairs with the same proportion
    and tier rules the local index uses."""
    from math import ceil

    ordered = sorted(counts, key=lambda kv: (-kv[1], kv[0]))
    total = sum(c for _t, c in counts)
    if n is not None:
        ordered = ordered[:n]
    if not ordered or total <= 0:
        return []
    page = ceil(len(ordered) / 5)
    return [
        RankedTerm(term, count, count / total, i // page + 1)
        for i, (term, count) in enumerate(ordered)
    ]


# ---------------------------------------------------------------------------
# FAERS-side views, converted onto the shared axes


def faers_query_kind(kind: str, drug_name_type: str) -> str:
    if kind == "effect":
        return "reaction"
    return "brand_name" if drug_name_type == "brand" else "generic_name"


def faers_opposite_count_field(kind: str, drug_name_type: str) -> str:
    if kind == "effect":
        return "brand_name" if drug_name_type == "brand" else "generic_name"
    return "reaction"


def yearly_from_receivedate(result: FaersCountResult) -> dict[int, int]:
    """Aggregate daily receive-date buckets (YYYYMMDD) into years."""
    years: dict[int, int] = {}
    for bucket, count in result.entries:
        if len(bucket) >= 4 and bucket[:4].isdigit():
            year = int(bucket[:4])
            years[year] = years.get(year, 0) + count
    return dict(sorted(years.items()))


def bucket_onset_ages(result: FaersCountResult) -> dict[AgeGroup, int]:
    """Bucket onset-age term counts (ages in years) into the shared
    age groups; unparseable terms land in unknown."""
    groups: dict[AgeGroup, int] = {}
    for term, count in result.entries:
        try:
            value = float(term)
        except ValueError:
            group = AgeGroup.UNKNOWN
        else:
            group = age_group(AgeValue.exact(min(max(value, 0.0), 150.0)))
        groups[group] = groups.get(group, 0) + count
    return groups


def faers_demographics(
    client: FaersClient, kind: str, term: str, drug_name_type: str = "generic"
) -> dict[str, int]:
    """(age group, gender) cells from one onset-age count query per sex."""
    cells: dict[str, int] = {}
    for sex in ("male", "female"):
        q = FaersQuery(
            kind=faers_query_kind(kind, drug_name_type),
            term=term,
            count_field="onset_age",
            limit=1000,
            sex=sex,
        )
        result = client.fetch_counts(q)
        gender = Gender(sex)
        for group, count in bucket_onset_ages(result).items():
            key = cell_key(group, gender)
            cells[key] = cells.get(key, 0) + count
    return cells


def faers_group_filters(group: str) -> dict:
    """Translate a shared group id into FAERS query filters."""
    if group in (g.value for g in Gender):
        if group == Gender.UNKNOWN.value:
            raise ValueError("FAERS breakdowns support male/female groups only")
        return {"sex": group}
    for ag, lo, hi in AGE_GROUP_BOUNDS:
        if ag.value == group:
            # The endpoint needs a finite range; 150 years bounds everything.
            return {"age_range": (lo, min(hi, 150.0)), "age_unit": "year"}
    raise ValueError(f"unknown group {group!r}")
