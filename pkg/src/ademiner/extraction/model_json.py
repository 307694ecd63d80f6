"""Schema mapping for remote annotation model output.

The adapter protocol fixes one wire shape: an array of event objects

    [{"event_type": "ADE", "arguments": {"treatment.drug": ["aspirin"]}}]

with roles in dotted form. ``null`` maps to an empty event list (the defined
repair of an empty response body). Roles outside the registry are dropped,
not fatal, and reported back as warnings.
"""

from __future__ import annotations

import json
from typing import Any

from .schema import EventType, PharmaEvent, ROLE_ORDER, ROLE_REGISTRY, Span


class ModelJsonError(ValueError):
    """Response body does not match the event-array schema."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message} at {path}")
        self.path = path


def parse_model_json(body: str) -> tuple[list[PharmaEvent], list[str]]:
    """Parse an event-array JSON body into events plus role warnings.

    The body must already be valid JSON; run repair_json on raw model
    output first.
    """
    data = json.loads(body)
    return events_from_obj(data)


def events_from_obj(data: Any) -> tuple[list[PharmaEvent], list[str]]:
    if data is None:
        return [], []
    if not isinstance(data, list):
        raise ModelJsonError("expected an array of events or null", "$")

    events: list[PharmaEvent] = []
    warnings: list[str] = []
    for i, obj in enumerate(data):
        path = f"$[{i}]"
        if not isinstance(obj, dict):
            raise ModelJsonError("expected an event object", path)
        try:
            event_type = EventType(obj.get("event_type"))
        except ValueError:
            raise ModelJsonError(
                f"unknown event_type {obj.get('event_type')!r}", f"{path}.event_type"
            ) from None
        raw_args = obj.get("arguments", {})
        if raw_args is None:
            raw_args = {}
        if not isinstance(raw_args, dict):
            raise ModelJsonError("expected a role->spans object", f"{path}.arguments")
        args: dict[str, list[Span]] = {}
        for role, spans in raw_args.items():
            if role not in ROLE_ORDER:
                warnings.append(f"dropped unknown role {role!r} in event {i}")
                continue
            if not isinstance(spans, list):
                raise ModelJsonError("expected a span array", f"{path}.arguments.{role}")
            texts = []
            for j, s in enumerate(spans):
                if not isinstance(s, str):
                    raise ModelJsonError(
                        "expected a string span", f"{path}.arguments.{role}[{j}]"
                    )
                texts.append(Span(s))
            if texts:
                args[role] = texts
        events.append(PharmaEvent(event_type, args))
    return events, warnings


def event_to_obj(event: PharmaEvent) -> dict[str, Any]:
    """Serialize one event into the wire schema (registry role order)."""
    args = {
        role: [s.text for s in event.args[role]]
        for role in ROLE_REGISTRY
        if role in event.args
    }
    return {"event_type": event.event_type.value, "arguments": args}


def events_to_json(events: list[PharmaEvent]) -> str:
    return json.dumps([event_to_obj(e) for e in events], ensure_ascii=False)
