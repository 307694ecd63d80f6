"""Tagged-sequence codec: canonical form, errors, and the round trip."""

import random

import pytest

from ademiner.extraction import (
    DelinearizeError,
    EventType,
    PharmaEvent,
    ROLE_REGISTRY,
    Span,
    delinearize,
    linearize,
    parent_role,
)


def make_event(args: dict[str, list[str]], event_type=EventType.ADE) -> PharmaEvent:
    return PharmaEvent(event_type, {r: [Span(t) for t in ts] for r, ts in args.items()})


def test_canonical_example():
    event = make_event({
        "subject": ["a 6-year-old boy"],
        "subject.age": ["6-year-old"],
        "treatment": ["aspirin"],
        "treatment.drug": ["aspirin"],
        "effect": ["rash"],
    })
    assert linearize(event) == (
        "[EV] ADE [SUBJECT] a 6-year-old boy [SUBJECT_AGE] 6-year-old "
        "[TREATMENT] aspirin [TREATMENT_DRUG] aspirin [EFFECT] rash"
    )


def test_empty_args_degenerate():
    assert linearize(PharmaEvent(EventType.PTE)) == "[EV] PTE"
    assert delinearize("[EV] PTE") == PharmaEvent(EventType.PTE)


def test_multiple_spans_keep_order():
    event = make_event({"effect": ["rash", "nausea"]})
    seq = linearize(event)
    assert seq == "[EV] ADE [EFFECT] rash [EFFECT] nausea"
    assert delinearize(seq) == event


def test_round_trip_of_example():
    event = make_event({
        "subject": ["a 6-year-old boy"],
        "subject.age": ["6-year-old"],
        "treatment": ["aspirin"],
        "treatment.drug": ["aspirin"],
        "effect": ["rash"],
    })
    assert delinearize(linearize(event)) == event


def test_unknown_tag_is_an_error():
    with pytest.raises(DelinearizeError, match=r"\[BOGUS\]"):
        delinearize("[EV] ADE [BOGUS] x")


def test_dangling_sub_role_is_an_error():
    with pytest.raises(DelinearizeError, match="subject"):
        delinearize("[EV] ADE [SUBJECT_AGE] 6")


def test_missing_ev_prefix():
    with pytest.raises(DelinearizeError, match=r"\[EV\]"):
        delinearize("[SUBJECT] someone")
    with pytest.raises(DelinearizeError, match=r"\[EV\]"):
        delinearize("hello world")


def test_unknown_event_type():
    with pytest.raises(DelinearizeError, match="XYZ"):
        delinearize("[EV] XYZ [EFFECT] rash")


def test_repeated_ev_tag():
    with pytest.raises(DelinearizeError, match="repeated"):
        delinearize("[EV] ADE [EFFECT] rash [EV] PTE")


def test_tag_like_span_text_survives_via_escaping():
    event = make_event({"effect": ["rash [EFFECT] marker", "plain [weird] text"]})
    seq = linearize(event)
    assert delinearize(seq) == event


def _random_span(rng: random.Random) -> str:
    words = ["rash", "nausea", "liver", "failure", "6-year-old", "acute",
             "x]y", "[low]", "a(b)", "µg/kg", "q.d."]
    text = " ".join(rng.choice(words) for _ in range(rng.randint(1, 4)))
    return text.strip()


def _random_event(rng: random.Random) -> PharmaEvent:
    args: dict[str, list[Span]] = {}
    for role in rng.sample(ROLE_REGISTRY, rng.randint(0, len(ROLE_REGISTRY))):
        args[role] = [Span(_random_span(rng)) for _ in range(rng.randint(1, 3))]
    for role in list(args):
        parent = parent_role(role)
        if parent is not None and parent not in args:
            args[parent] = [Span(_random_span(rng))]
    return PharmaEvent(rng.choice(list(EventType)), args)


def test_round_trip_randomized_1000():
    rng = random.Random(20240901)
    for _ in range(1000):
        event = _random_event(rng)
        assert delinearize(linearize(event)) == event
