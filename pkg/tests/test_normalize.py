"""Normalization rule tables: ages, genders, terms, and the per-article
merge."""

import pytest

from ademiner.extraction import EventType, PharmaEvent, Span
from ademiner.normalize import (
    AgeValue,
    Gender,
    NormalizationError,
    SynonymLoadError,
    load_synonyms,
    normalize_age,
    normalize_gender,
    normalize_term,
)
from ademiner.records import merge_by_drug

# --------------------------------------------------------------------------
# Age rule table (34 strings)

AGE_CASES = [
    # exact year phrases
    ("6 years old", AgeValue.exact(6.0)),
    ("6-year-old", AgeValue.exact(6.0)),
    ("6 year old", AgeValue.exact(6.0)),
    ("a 45-year-old man", AgeValue.exact(45.0)),
    ("45-years-old", AgeValue.exact(45.0)),
    ("0.5 years old", AgeValue.exact(0.5)),
    ("aged 72", AgeValue.exact(72.0)),
    ("patient aged 3", AgeValue.exact(3.0)),
    ("30 yo", AgeValue.exact(30.0)),
    ("30 y/o", AgeValue.exact(30.0)),
    ("A 101-year-old woman", AgeValue.exact(101.0)),
    # unit scaling
    ("3 months", AgeValue.exact(3 / 12)),
    ("1 month", AgeValue.exact(1 / 12)),
    ("18 months", AgeValue.exact(1.5)),
    ("3-month-old", AgeValue.exact(0.25)),
    ("6 weeks", AgeValue.exact(6 / 52)),
    ("2-week-old", AgeValue.exact(2 / 52)),
    ("10 days", AgeValue.exact(10 / 365)),
    ("4 day old", AgeValue.exact(4 / 365)),
    # decade phrases
    ("in his sixties", AgeValue.range(60.0, 69.0)),
    ("in her twenties", AgeValue.range(20.0, 29.0)),
    ("a man in his thirties", AgeValue.range(30.0, 39.0)),
    ("in her nineties", AgeValue.range(90.0, 99.0)),
    ("In His Fifties", AgeValue.range(50.0, 59.0)),
    # life-stage words
    ("neonate", AgeValue.range(0.0, 0.077)),
    ("infant", AgeValue.range(0.0, 2.0)),
    ("a child", AgeValue.range(2.0, 12.0, hi_open=True)),
    ("adolescent", AgeValue.range(12.0, 18.0, hi_open=True)),
    ("teenager", AgeValue.range(12.0, 18.0, hi_open=True)),
    ("an adult", AgeValue.range(18.0, 65.0, hi_open=True)),
    ("elderly", AgeValue.range(65.0, 150.0)),
    # fallback
    ("middle-aged", AgeValue.unknown()),
    ("unknown", AgeValue.unknown()),
    ("the patient", AgeValue.unknown()),
]


@pytest.mark.parametrize("span,expected", AGE_CASES)
def test_age_rule_table(span, expected):
    assert normalize_age(span) == expected


def test_age_idempotent_via_canonical_rendering():
    for span, _expected in AGE_CASES:
        value = normalize_age(span)
        assert normalize_age(value.canonical_text()) == value


def test_age_invariants():
    with pytest.raises(NormalizationError):
        AgeValue("range", 5.0, 3.0)
    with pytest.raises(NormalizationError):
        AgeValue("exact", 5.0, 6.0)
    with pytest.raises(NormalizationError):
        AgeValue("range", -1.0, 3.0)
    with pytest.raises(NormalizationError):
        AgeValue("unknown", 1.0, 2.0)


# --------------------------------------------------------------------------
# Gender keyword table (17 strings)

GENDER_CASES = [
    ("a 45-year-old woman", Gender.FEMALE),
    ("woman", Gender.FEMALE),
    ("female", Gender.FEMALE),
    ("a young girl", Gender.FEMALE),
    ("she", Gender.FEMALE),
    ("her symptoms", Gender.FEMALE),
    ("an elderly lady", Gender.FEMALE),
    ("man", Gender.MALE),
    ("MALE", Gender.MALE),
    ("the boy", Gender.MALE),
    ("he", Gender.MALE),
    ("his rash", Gender.MALE),
    ("a 72-year-old gentleman", Gender.MALE),
    ("the patient", Gender.UNKNOWN),
    ("male and female twins", Gender.UNKNOWN),
    ("he and she", Gender.UNKNOWN),
    ("mankind", Gender.UNKNOWN),  # word boundary: no bare keyword
]


@pytest.mark.parametrize("span,expected", GENDER_CASES)
def test_gender_rule_table(span, expected):
    assert normalize_gender(span) == expected


def test_gender_idempotent_on_canonical_rendering():
    for value in Gender:
        assert normalize_gender(value.value) == value


# --------------------------------------------------------------------------
# Term cleaning table (18 strings)

TERM_CASES = [
    ("Aspirin 100 mg oral", "aspirin"),
    ("  Liver   Failure. ", "liver failure"),
    ("'nausea'", "nausea"),
    ('"Rash"', "rash"),
    ("ibuprofen 400mg", "ibuprofen"),
    ("methotrexate 7.5 mg/week", "methotrexate"),
    ("vancomycin 1 g", "vancomycin"),
    ("morphine 10 mcg/kg", "morphine"),
    ("insulin 20 iu", "insulin"),
    ("amoxicillin 5 ml", "amoxicillin"),
    ("prednisolone tablets", "prednisolone"),
    ("diclofenac capsule", "diclofenac"),
    ("heparin injection", "heparin"),
    ("ceftriaxone IV", "ceftriaxone"),
    ("lidocaine intravenous", "lidocaine"),
    ("warfarin (oral)", "warfarin"),
    ("Stevens-Johnson Syndrome", "stevens-johnson syndrome"),
    ("QT   prolongation", "qt prolongation"),
]


@pytest.mark.parametrize("span,expected", TERM_CASES)
def test_term_rule_table(span, expected):
    assert normalize_term(span, "drug") == expected


def test_term_synonym_lookup():
    table = {"ten": "toxic epidermal necrolysis"}
    assert normalize_term("TEN", "effect", table) == "toxic epidermal necrolysis"
    assert normalize_term("rash", "effect", table) == "rash"


def test_term_idempotent():
    for span, _ in TERM_CASES:
        once = normalize_term(span, "drug")
        assert normalize_term(once, "drug") == once


def test_term_cleaning_to_nothing_is_an_error():
    with pytest.raises(NormalizationError):
        normalize_term("100 mg", "drug")
    with pytest.raises(NormalizationError):
        normalize_term("...", "drug")


def test_synonym_file_loading(tmp_path):
    path = tmp_path / "syn.tsv"
    path.write_text("ten\ttoxic epidermal necrolysis\nasa\taspirin\n", encoding="utf-8")
    assert load_synonyms(path) == {
        "ten": "toxic epidermal necrolysis",
        "asa": "aspirin",
    }


def test_synonym_duplicate_is_a_load_error_naming_the_line(tmp_path):
    path = tmp_path / "syn.tsv"
    path.write_text("ten\tone thing\nten\tanother\n", encoding="utf-8")
    with pytest.raises(SynonymLoadError, match="line 2"):
        load_synonyms(path)


# --------------------------------------------------------------------------
# Merge by drug


def ev(args: dict[str, list[str]], event_type=EventType.ADE) -> PharmaEvent:
    return PharmaEvent(event_type, {r: [Span(t) for t in ts] for r, ts in args.items()})


def test_same_drug_effects_union():
    events = [
        (0, ev({"treatment.drug": ["aspirin"], "effect": ["rash"]})),
        (1, ev({"treatment.drug": ["Aspirin 100 mg"], "effect": ["nausea"]})),
    ]
    records = merge_by_drug("1", 2020, events)
    assert len(records) == 1
    assert records[0].drug == "aspirin"
    assert records[0].effects == {"nausea", "rash"}
    assert records[0].source_sentences == [(0, 0), (1, 0)]


def test_two_drugs_two_records():
    events = [
        (0, ev({"treatment.drug": ["aspirin"], "effect": ["rash"]})),
        (1, ev({"treatment.drug": ["ibuprofen"], "effect": ["nausea"]})),
    ]
    records = merge_by_drug("1", 2020, events)
    assert [r.drug for r in records] == ["aspirin", "ibuprofen"]


def test_age_specificity_rule():
    events = [
        (0, ev({"treatment.drug": ["aspirin"], "subject.age": ["elderly"]})),
        (1, ev({"treatment.drug": ["aspirin"], "subject.age": ["6 years old"]})),
    ]
    (record,) = merge_by_drug("1", 2020, events)
    assert record.age == AgeValue.exact(6.0)


def test_age_tie_breaks_to_earliest_sentence():
    events = [
        (2, ev({"treatment.drug": ["aspirin"], "subject.age": ["aged 70"]})),
        (1, ev({"treatment.drug": ["aspirin"], "subject.age": ["aged 30"]})),
    ]
    (record,) = merge_by_drug("1", 2020, events)
    assert record.age == AgeValue.exact(30.0)


def test_gender_resolution_per_article():
    events = [
        (0, ev({"treatment.drug": ["aspirin"]})),
        (1, ev({"treatment.drug": ["ibuprofen"], "subject.gender": ["woman"]})),
    ]
    records = merge_by_drug("1", 2020, events)
    assert all(r.gender == Gender.FEMALE for r in records)


def test_event_without_drug_produces_no_record():
    events = [(0, ev({"effect": ["rash"]}))]
    assert merge_by_drug("1", 2020, events) == []


def test_merge_conservation_of_drug_effect_pairs():
    events = [
        (0, ev({"treatment.drug": ["aspirin"], "effect": ["rash", "nausea"]})),
        (1, ev({"treatment.drug": ["aspirin", "ibuprofen"], "effect": ["fever"]})),
        (2, ev({"effect": ["headache"]})),  # no drug: dropped
    ]
    records = merge_by_drug("1", 2020, events)
    got = {(r.drug, e) for r in records for e in r.effects}
    want = {
        ("aspirin", "rash"), ("aspirin", "nausea"), ("aspirin", "fever"),
        ("ibuprofen", "fever"),
    }
    assert got == want


def test_merge_order_independence_with_distinct_sentences():
    events = [
        (0, ev({"treatment.drug": ["aspirin"], "effect": ["rash"], "subject.age": ["aged 4"]})),
        (1, ev({"treatment.drug": ["ibuprofen"], "effect": ["nausea"]})),
        (2, ev({"treatment.drug": ["aspirin"], "effect": ["fever"], "subject.gender": ["boy"]})),
    ]
    forward = merge_by_drug("1", 2019, list(events))
    backward = merge_by_drug("1", 2019, list(reversed(events)))
    as_key = lambda rs: {(r.drug, frozenset(r.effects), r.age, r.gender) for r in rs}
    assert as_key(forward) == as_key(backward)
