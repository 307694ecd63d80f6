"""Classification and argument-extraction scoring against independent
tallies."""

import random

import pytest

from ademiner.extraction import EventType, PharmaEvent, Span
from ademiner.evaluation import (
    EvalError,
    classification_metrics,
    em_f1,
    pct,
    report_dict,
    split_dataset,
    token_f1,
)

import oracle


def ev(args: dict[str, list[str]], event_type=EventType.ADE) -> PharmaEvent:
    return PharmaEvent(event_type, {r: [Span(t) for t in ts] for r, ts in args.items()})


# ---------------------------------------------------------------------------
# Classification


def test_symmetric_confusion_matrix_all_90():
    gold = [True] * 100 + [False] * 100
    pred = [True] * 90 + [False] * 10 + [True] * 10 + [False] * 90
    result = classification_metrics(gold, pred)
    assert (pct(result.precision), pct(result.recall)) == (90.0, 90.0)
    assert (pct(result.f1), pct(result.accuracy)) == (90.0, 90.0)


def test_perfect_prediction_is_all_100():
    gold = [True, False, True, False]
    result = classification_metrics(gold, gold)
    assert pct(result.precision) == pct(result.recall) == 100.0
    assert pct(result.f1) == pct(result.accuracy) == 100.0


def test_zero_predicted_positives_flagged():
    result = classification_metrics([True, False], [False, False])
    assert result.precision == 0.0
    assert result.no_predicted_positives


def test_classification_against_brute_force_tally():
    rng = random.Random(3)
    gold = [rng.random() < 0.5 for _ in range(200)]
    pred = [rng.random() < 0.5 for _ in range(200)]
    result = classification_metrics(gold, pred)
    tp = sum(g and p for g, p in zip(gold, pred))
    fp = sum((not g) and p for g, p in zip(gold, pred))
    fn = sum(g and not p for g, p in zip(gold, pred))
    tn = sum((not g) and (not p) for g, p in zip(gold, pred))
    assert (result.tp, result.fp, result.fn, result.tn) == (tp, fp, fn, tn)
    assert result.precision == pytest.approx(tp / (tp + fp))
    assert result.recall == pytest.approx(tp / (tp + fn))
    assert result.accuracy == pytest.approx((tp + tn) / 200)


def test_classification_length_mismatch():
    with pytest.raises(EvalError):
        classification_metrics([True], [True, False])


# ---------------------------------------------------------------------------
# EM / token scores


def test_em_perfect_prediction_fixed_point():
    gold = [[ev({"treatment.drug": ["aspirin"], "effect": ["rash"]})]]
    scores = em_f1(gold, gold)
    assert scores.overall.f1 == 1.0
    assert scores.main.f1 == 1.0
    assert scores.sub.f1 == 1.0


def test_em_exact_match_rule():
    gold = [[ev({"treatment.drug": ["aspirin"]})]]
    pred = [[ev({"treatment.drug": ["aspirin 100mg"]})]]
    scores = em_f1(gold, pred)
    tally = scores.per_role["treatment.drug"]
    assert (tally.tp, tally.fp, tally.fn) == (0, 1, 1)


def test_em_duplicate_spans_match_by_multiset():
    gold = [[ev({"effect": ["rash", "rash"]})]]
    pred = [[ev({"effect": ["rash"]})]]
    tally = em_f1(gold, pred).per_role["effect"]
    assert (tally.tp, tally.fp, tally.fn) == (1, 0, 1)


def test_token_f1_example_two_thirds():
    gold = [[ev({"effect": ["liver failure"]})]]
    pred = [[ev({"effect": ["acute liver failure"]})]]
    tally = token_f1(gold, pred).per_role["effect"]
    assert tally.precision == pytest.approx(2 / 3)
    assert tally.recall == pytest.approx(1.0)
    assert tally.f1 == pytest.approx(0.8)


def test_token_f1_disjoint_spans_zero():
    gold = [[ev({"effect": ["rash"]})]]
    pred = [[ev({"effect": ["nausea"]})]]
    assert token_f1(gold, pred).overall.f1 == 0.0


def test_unknown_role_is_an_error():
    bad = PharmaEvent(EventType.ADE, {"bogus.role": [Span("x")]})
    with pytest.raises(EvalError):
        em_f1([[bad]], [[bad]])


def _random_sentences(rng: random.Random, n: int):
    roles = ["subject", "treatment", "effect", "subject.age", "treatment.drug",
             "treatment.dosage", "subject.gender"]
    spans = ["rash", "acute rash", "aspirin", "aspirin 100 mg", "liver failure",
             "acute liver failure", "boy", "6-year-old", "fever", "severe fever"]
    sentences = []
    for _ in range(n):
        events = []
        for _ in range(rng.randint(0, 2)):
            args = {
                role: [rng.choice(spans) for _ in range(rng.randint(1, 2))]
                for role in rng.sample(roles, rng.randint(1, 4))
            }
            events.append(ev(args))
        sentences.append(events)
    return sentences


def test_em_and_token_match_oracles_on_random_sets():
    rng = random.Random(77)
    for _ in range(25):
        gold = _random_sentences(rng, rng.randint(1, 10))
        pred = _random_sentences(rng, len(gold))

        em_scores = em_f1(gold, pred)
        em_tallies = oracle.oracle_em_tally(gold, pred)
        assert em_scores.overall.f1 == pytest.approx(
            oracle.micro_f1(em_tallies), abs=1e-9
        )
        main = {"subject", "treatment", "effect"}
        assert em_scores.main.f1 == pytest.approx(
            oracle.micro_f1(em_tallies, main), abs=1e-9
        )
        assert em_scores.sub.f1 == pytest.approx(
            oracle.micro_f1(em_tallies, set(em_tallies) - main), abs=1e-9
        )

        token_scores = token_f1(gold, pred)
        token_tallies, optimal_tp = oracle.oracle_token_tally(gold, pred)
        assert token_scores.overall.f1 == pytest.approx(
            oracle.micro_f1(token_tallies), abs=1e-9
        )
        # The greedy pairing can differ from the optimal assignment; report,
        # never assert, the delta.
        greedy_tp = sum(t[0] for t in token_tallies.values())
        best_tp = sum(optimal_tp.values())
        assert greedy_tp <= best_tp


def test_gold_pred_symmetry_swaps_p_and_r():
    rng = random.Random(13)
    gold = _random_sentences(rng, 8)
    pred = _random_sentences(rng, 8)
    fwd, rev = em_f1(gold, pred), em_f1(pred, gold)
    assert fwd.overall.precision == pytest.approx(rev.overall.recall, abs=1e-12)
    assert fwd.overall.recall == pytest.approx(rev.overall.precision, abs=1e-12)
    assert fwd.overall.f1 == pytest.approx(rev.overall.f1, abs=1e-12)
    fwd_t, rev_t = token_f1(gold, pred), token_f1(pred, gold)
    assert fwd_t.overall.precision == pytest.approx(rev_t.overall.recall, abs=1e-12)
    assert fwd_t.overall.f1 == pytest.approx(rev_t.overall.f1, abs=1e-12)


def test_monotone_degradation():
    gold = [[ev({"effect": ["rash", "fever"], "treatment.drug": ["aspirin"]})]]
    pred_full = [[ev({"effect": ["rash", "fever"], "treatment.drug": ["aspirin"]})]]
    pred_missing = [[ev({"effect": ["rash"], "treatment.drug": ["aspirin"]})]]
    assert em_f1(gold, pred_missing).overall.f1 <= em_f1(gold, pred_full).overall.f1
    assert token_f1(gold, pred_missing).overall.f1 <= token_f1(gold, pred_full).overall.f1


def test_micro_average_consistency():
    rng = random.Random(29)
    gold = _random_sentences(rng, 10)
    pred = _random_sentences(rng, 10)
    scores = em_f1(gold, pred)
    total = sum(t.tp + t.fp + t.fn for t in scores.per_role.values())
    assert total == scores.overall.tp + scores.overall.fp + scores.overall.fn
    assert scores.overall.tp == scores.main.tp + scores.sub.tp


def test_f1_is_harmonic_mean_of_own_tallies():
    rng = random.Random(31)
    gold = _random_sentences(rng, 12)
    pred = _random_sentences(rng, 12)
    for scores in (em_f1(gold, pred), token_f1(gold, pred)):
        for tally in [scores.overall, scores.main, scores.sub, *scores.per_role.values()]:
            p, r = tally.precision, tally.recall
            expected = 2 * p * r / (p + r) if p + r else 0.0
            assert tally.f1 == pytest.approx(expected, abs=1e-9)


# ---------------------------------------------------------------------------
# Dataset splitting


def test_split_10_into_6_2_2():
    train, valid, test = split_dataset(list(range(10)), (0.6, 0.2, 0.2), seed=1)
    assert (len(train), len(valid), len(test)) == (6, 2, 2)
    assert sorted(train + valid + test) == list(range(10))


def test_split_5_into_7_1_2_floor_with_remainder_to_train():
    train, valid, test = split_dataset(list(range(5)), (0.7, 0.1, 0.2), seed=9)
    assert (len(train), len(valid), len(test)) == (4, 0, 1)


def test_split_determinism():
    a = split_dataset(list(range(100)), (0.6, 0.2, 0.2), seed=42)
    b = split_dataset(list(range(100)), (0.6, 0.2, 0.2), seed=42)
    assert a == b
    c = split_dataset(list(range(100)), (0.6, 0.2, 0.2), seed=43)
    assert a != c


def test_split_input_validation():
    with pytest.raises(EvalError):
        split_dataset([], (0.6, 0.2, 0.2), seed=1)
    with pytest.raises(EvalError):
        split_dataset([1], (0.5, 0.2, 0.2), seed=1)


def test_report_dict_shape():
    gold = [[ev({"effect": ["rash"], "subject.age": ["6-year-old"], "subject": ["boy"]})]]
    report = report_dict(em_f1(gold, gold), token_f1(gold, gold), per_role=True)
    assert report["overall_em_f1"] == 100.0
    assert report["main_token_f1"] == 100.0
    assert report["sub_em_f1"] == 100.0
    assert report["role.subject.age.em_f1"] == 100.0
