"""Article-level event records and the merge that produces them.

Extraction yields one event per sentence; search wants one record per
(article, drug). ``merge_by_drug`` unions the effects of all events naming a
drug and resolves age and gender once per article: the most specific
non-unknown value wins (exact beats range beats unknown), ties broken by
earliest sentence, then by event order within the sentence.

Records serialize one JSON object per line with sorted keys, so a record
store written twice from the same input is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from .extraction.schema import PharmaEvent
from .normalize import (
    AgeValue,
    Gender,
    NormalizationError,
    normalize_age,
    normalize_gender,
    normalize_term,
)


@dataclass
class NormalizedEventRecord:
    pmid: str
    drug: str
    effects: set[str] = field(default_factory=set)
    age: AgeValue = field(default_factory=AgeValue.unknown)
    gender: Gender = Gender.UNKNOWN
    year: int | None = None
    source_sentences: list[tuple[int, int]] = field(default_factory=list)


def event_drugs(event: PharmaEvent, synonyms: dict[str, str] | None = None) -> list[str]:
    """Canonical drugs named by an event; spans that clean to nothing are
    skipped."""
    out: list[str] = []
    for span in event.args.get("treatment.drug", ()):
        try:
            drug = normalize_term(span.text, "drug", synonyms)
        except NormalizationError:
            continue
        if drug not in out:
            out.append(drug)
    return out


def _event_effects(event: PharmaEvent, synonyms: dict[str, str] | None) -> list[str]:
    out: list[str] = []
    for span in event.args.get("effect", ()):
        try:
            effect = normalize_term(span.text, "effect", synonyms)
        except NormalizationError:
            continue
        if effect not in out:
            out.append(effect)
    return out


_AGE_SPECIFICITY = {"exact": 2, "range": 1, "unknown": 0}


def merge_by_drug(
    pmid: str,
    year: int | None,
    events: Iterable[tuple[int, PharmaEvent]],
    synonyms: dict[str, str] | None = None,
) -> list[NormalizedEventRecord]:
    """Merge one article's (sentence_index, event) pairs into per-drug
    records. Events naming no drug produce no record."""
    ordered = list(events)
    ordinals: dict[int, int] = {}

    by_drug: dict[str, NormalizedEventRecord] = {}
    best_age: tuple[int, int, int] | None = None  # (-specificity, sentence, ordinal)
    age = AgeValue.unknown()
    best_gender: tuple[int, int] | None = None
    gender = Gender.UNKNOWN

    for sent_idx, event in ordered:
        ordinal = ordinals.get(sent_idx, 0)
        ordinals[sent_idx] = ordinal + 1

        for span in event.args.get("subject.age", ()):
            candidate = normalize_age(span.text)
            key = (-_AGE_SPECIFICITY[candidate.kind], sent_idx, ordinal)
            if candidate.kind != "unknown" and (best_age is None or key < best_age):
                best_age, age = key, candidate
        for span in event.args.get("subject.gender", ()):
            candidate = normalize_gender(span.text)
            key = (sent_idx, ordinal)
            if candidate != Gender.UNKNOWN and (best_gender is None or key < best_gender):
                best_gender, gender = key, candidate

        drugs = event_drugs(event, synonyms)
        effects = _event_effects(event, synonyms)
        for drug in drugs:
            record = by_drug.get(drug)
            if record is None:
                record = NormalizedEventRecord(pmid=pmid, drug=drug, year=year)
                by_drug[drug] = record
            record.effects.update(effects)
            record.source_sentences.append((sent_idx, ordinal))

    records = [by_drug[d] for d in sorted(by_drug)]
    for record in records:
        record.age = age
        record.gender = gender
    return records


# ---------------------------------------------------------------------------
# Record store serialization (line-delimited JSON)


def _age_to_obj(age: AgeValue) -> dict:
    if age.kind == "unknown":
        return {"kind": "unknown"}
    obj = {"kind": age.kind, "lo": age.years_lo, "hi": age.years_hi}
    if age.hi_open:
        obj["hi_open"] = True
    return obj


def _age_from_obj(obj: dict) -> AgeValue:
    if obj["kind"] == "unknown":
        return AgeValue.unknown()
    return AgeValue(obj["kind"], obj["lo"], obj["hi"], obj.get("hi_open", False))


def record_to_line(record: NormalizedEventRecord) -> str:
    obj = {
        "pmid": record.pmid,
        "drug": record.drug,
        "effects": sorted(record.effects),
        "age": _age_to_obj(record.age),
        "gender": record.gender.value,
        "year": record.year,
        "source_sentences": [list(p) for p in record.source_sentences],
    }
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def record_from_line(line: str) -> NormalizedEventRecord:
    obj = json.loads(line)
    return NormalizedEventRecord(
        pmid=obj["pmid"],
        drug=obj["drug"],
        effects=set(obj.get("effects", ())),
        age=_age_from_obj(obj.get("age", {"kind": "unknown"})),
        gender=Gender(obj.get("gender", "unknown")),
        year=obj.get("year"),
        source_sentences=[tuple(p) for p in obj.get("source_sentences", ())],
    )


def write_records(records: Iterable[NormalizedEventRecord], out: TextIO) -> int:
    n = 0
    for record in records:
        out.write(record_to_line(record) + "\n")
        n += 1
    return n


def read_records(path: str | Path) -> list[NormalizedEventRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_line(line))
    return records


def append_records(
    existing: Iterable[NormalizedEventRecord],
    new: Iterable[NormalizedEventRecord],
) -> list[NormalizedEventRecord]:
    """Incremental update: records for a pmid seen again replace all of that
    pmid's previous records (newest wins)."""
    new = list(new)
    new_pmids = {r.pmid for r in new}
    merged = [r for r in existing if r.pmid not in new_pmids]
    merged.extend(new)
    return merged
