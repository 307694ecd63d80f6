"""Rule-based extractor, remote adapter, and the model-output schema."""

import json

import pytest

from ademiner.extraction import (
    EventType,
    Lexicons,
    ModelJsonError,
    PharmaEvent,
    RemoteExtractor,
    RemoteExtractorError,
    RuleBasedExtractor,
    Span,
    event_to_obj,
    load_lexicon,
    parse_model_json,
    repair_json,
)

LEX = Lexicons(
    drugs=("aspirin", "ibuprofen", "phenytoin"),
    effects=("liver failure", "failure", "rash", "nausea"),
)


@pytest.fixture
def rule():
    return RuleBasedExtractor(LEX)


def test_example_sentence(rule):
    events = rule.extract("A 6-year-old boy developed rash after aspirin.")
    assert len(events) == 1
    event = events[0]
    assert event.event_type == EventType.ADE
    assert [s.text for s in event.args["treatment.drug"]] == ["aspirin"]
    assert [s.text for s in event.args["effect"]] == ["rash"]
    assert [s.text for s in event.args["subject.age"]] == ["6-year-old"]
    assert [s.text for s in event.args["subject.gender"]] == ["boy"]


def test_no_lexicon_hit_yields_nothing(rule):
    assert rule.extract("The protocol was approved.") == []


def test_drug_without_effect_yields_nothing(rule):
    assert rule.extract("He took aspirin daily.") == []


def test_longest_match_wins(rule):
    events = rule.extract("Ibuprofen caused acute liver failure.")
    assert [s.text for s in events[0].args["effect"]] == ["liver failure"]


def test_offsets_anchor_spans(rule):
    sentence = "A 6-year-old boy developed rash after aspirin."
    for event in rule.extract(sentence):
        for spans in event.args.values():
            for span in spans:
                assert sentence[span.start : span.end] == span.text


def test_extractor_is_pure(rule):
    sentence = "Rash and nausea after aspirin in a woman in her sixties."
    assert rule.extract(sentence) == rule.extract(sentence)


def test_case_insensitive_matching(rule):
    events = rule.extract("ASPIRIN therapy led to RASH.")
    assert [s.text for s in events[0].args["treatment.drug"]] == ["ASPIRIN"]


def test_lexicon_file_loading(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("# comment line\naspirin\n\nLIVER failure  \n", encoding="utf-8")
    assert load_lexicon(path) == ["aspirin", "liver failure"]


# ---------------------------------------------------------------------------
# Model-output schema


def test_parse_model_json_direct_mapping():
    body = '[{"event_type":"ADE","arguments":{"treatment.drug":["aspirin"],"effect":["rash"]}}]'
    events, warnings = parse_model_json(body)
    assert warnings == []
    assert events == [
        PharmaEvent(
            EventType.ADE,
            {"treatment.drug": [Span("aspirin")], "effect": [Span("rash")]},
        )
    ]


def test_parse_model_json_null_is_empty():
    assert parse_model_json("null") == ([], [])


def test_parse_model_json_unknown_role_dropped_with_warning():
    body = '[{"event_type":"ADE","arguments":{"treatment.dose":["5 mg"],"effect":["rash"]}}]'
    events, warnings = parse_model_json(body)
    assert list(events[0].args) == ["effect"]
    assert any("treatment.dose" in w for w in warnings)


@pytest.mark.parametrize(
    "body,path",
    [
        ('{"events": []}', "$"),
        ("[42]", "$[0]"),
        ('[{"event_type":"ADE","arguments":{"effect":"rash"}}]', "$[0].arguments.effect"),
        ('[{"event_type":"BAD","arguments":{}}]', "$[0].event_type"),
        ('[{"event_type":"ADE","arguments":{"effect":[1]}}]', "$[0].arguments.effect[0]"),
    ],
)
def test_parse_model_json_schema_errors_name_the_path(body, path):
    with pytest.raises(ModelJsonError) as err:
        parse_model_json(body)
    assert err.value.path == path


# ---------------------------------------------------------------------------
# Remote adapter (scripted transports; no network)

WIRE_EVENTS = [
    {"event_type": "ADE",
     "arguments": {"treatment.drug": ["aspirin"], "effect": ["rash", "nausea"]}},
    {"event_type": "PTE", "arguments": {"treatment.drug": ["ibuprofen"]}},
]


def scripted(status: int, body: str):
    calls = []

    def transport(url, payload, timeout):
        calls.append((url, payload, timeout))
        return status, body

    return transport, calls


def test_remote_well_formed_fixture():
    body = json.dumps(WIRE_EVENTS)
    transport, calls = scripted(200, body)
    remote = RemoteExtractor(endpoint="http://x/annotate", model="m1", transport=transport)
    events = remote.extract("some sentence")
    assert [event_to_obj(e) for e in events] == WIRE_EVENTS
    assert calls[0][1] == {"sentence": "some sentence", "model": "m1"}


def test_remote_truncated_body_equals_untruncated_when_cut_between_events():
    body = json.dumps(WIRE_EVENTS)
    cut = body.index("}, {") + 1  # after the last complete event object
    full_transport, _ = scripted(200, body)
    cut_transport, _ = scripted(200, body[:cut])
    full = RemoteExtractor(endpoint="http://x", model="m", transport=full_transport)
    trunc = RemoteExtractor(endpoint="http://x", model="m", transport=cut_transport)
    assert trunc.extract("s") == full.extract("s")[:1]
    # and a cut after *all* complete events reproduces the full parse
    cut2 = body.rindex("}") - 1
    t2, _ = scripted(200, body[:cut2] + "}")
    assert RemoteExtractor(endpoint="http://x", model="m", transport=t2).extract("s") == full.extract("s")


def test_remote_empty_body_is_empty_event_list():
    transport, _ = scripted(200, "")
    remote = RemoteExtractor(endpoint="http://x", model="m", transport=transport)
    assert remote.extract("s") == []


def test_remote_http_error_is_retriable_when_server_side():
    transport, _ = scripted(503, "oops")
    remote = RemoteExtractor(endpoint="http://x", model="m", transport=transport)
    with pytest.raises(RemoteExtractorError) as err:
        remote.extract("s")
    assert err.value.retriable


def test_remote_irreparable_body_carries_raw():
    transport, _ = scripted(200, '}{"not a prefix')
    remote = RemoteExtractor(endpoint="http://x", model="m", transport=transport)
    with pytest.raises(RemoteExtractorError) as err:
        remote.extract("s")
    assert err.value.raw_body == '}{"not a prefix'


def test_repair_then_parse_of_truncated_event():
    partial = '[{"event_type":"ADE","arguments":{"effect":["naus'
    events, _ = parse_model_json(repair_json(partial))
    assert [s.text for s in events[0].args["effect"]] == ["naus"]


def test_remote_in_flight_limit_bounds_concurrency():
    import threading
    import time

    active = []
    peak = []
    lock = threading.Lock()

    def slow_transport(url, payload, timeout):
        with lock:
            active.append(1)
            peak.append(len(active))
        time.sleep(0.02)
        with lock:
            active.pop()
        return 200, "[]"

    remote = RemoteExtractor(
        endpoint="http://x", model="m", transport=slow_transport, max_in_flight=2
    )
    threads = [threading.Thread(target=remote.extract, args=("s",)) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) <= 2
