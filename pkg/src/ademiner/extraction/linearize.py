"""Tagged-text codec for events.

Sequence-to-sequence extractors are trained on a flat rendering of the
structured event. The canonical form here is ``[EV] <type>`` followed by one
``[<ROLE_TAG>] <span>`` segment per span, in registry order, sub-roles
directly after their parent. ``delinearize`` inverts the encoding so model
output can be consumed.

Span text that itself contains a tag-shaped substring (``[UPPER_CASE]``) is
escaped by doubling the opening bracket, so the round trip holds for those
spans too. Span text is trimmed on decode: spans with leading or trailing
whitespace do not survive the round trip, nor do span offsets (the sequence
carries surface strings only).
"""

from __future__ import annotations

import re

from .schema import (
    EventType,
    PharmaEvent,
    ROLE_REGISTRY,
    Span,
    parent_role,
    role_tag,
    tag_role,
    validate_event,
)

_TAG_BODY = re.compile(r"\[[A-Z_]+\]")
_ESCAPE = re.compile(r"\[(?=[A-Z_]+\])")


class DelinearizeError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


def _escape(text: str) -> str:
    return _ESCAPE.sub("[[", text)


def linearize(event: PharmaEvent) -> str:
    """Render a valid event as its canonical tagged sequence."""
    validate_event(event)
    parts = ["[EV]", event.event_type.value]
    for role in ROLE_REGISTRY:
        for span in event.args.get(role, ()):
            parts.append(f"[{role_tag(role)}]")
            parts.append(_escape(span.text))
    return " ".join(parts)


def _tokenize(seq: str) -> list[tuple[str, str, int]]:
    """Split into ("tag", name, pos) and ("text", chunk, pos) tokens.

    ``[[`` followed by a tag body decodes to a literal ``[``; any other
    bracket is plain text unless it opens a tag-shaped substring.
    """
    tokens: list[tuple[str, str, int]] = []
    buf: list[str] = []
    buf_start = 0
    i = 0
    n = len(seq)

    def flush() -> None:
        nonlocal buf
        if buf:
            tokens.append(("text", "".join(buf), buf_start))
            buf = []

    while i < n:
        ch = seq[i]
        if ch == "[":
            if seq.startswith("[[", i) and _TAG_BODY.match(seq, i + 1):
                if not buf:
                    buf_start = i
                buf.append("[")
                i += 2
                continue
            m = _TAG_BODY.match(seq, i)
            if m:
                flush()
                tokens.append(("tag", seq[i + 1 : m.end() - 1], i))
                i = m.end()
                continue
        if not buf:
            buf_start = i
        buf.append(ch)
        i += 1
    flush()
    return tokens


def delinearize(seq: str) -> PharmaEvent:
    """Parse a tagged sequence back into an event.

    Raises DelinearizeError for a missing ``[EV]`` prefix, an unknown event
    type, a tag outside the registry, a repeated ``[EV]``, or a sub-role
    whose main role is absent.
    """
    tokens = _tokenize(seq)
    idx = 0
    if tokens and tokens[0][0] == "text":
        if tokens[0][1].strip():
            raise DelinearizeError("expected [EV] prefix", tokens[0][2])
        idx = 1
    if idx >= len(tokens) or tokens[idx][0] != "tag" or tokens[idx][1] != "EV":
        pos = tokens[idx][2] if idx < len(tokens) else len(seq)
        raise DelinearizeError("expected [EV] prefix", pos)
    idx += 1

    if idx >= len(tokens) or tokens[idx][0] != "text":
        pos = tokens[idx][2] if idx < len(tokens) else len(seq)
        raise DelinearizeError("missing event type after [EV]", pos)
    type_text = tokens[idx][1].strip()
    try:
        event_type = EventType(type_text)
    except ValueError:
        raise DelinearizeError(f"unknown event type {type_text!r}", tokens[idx][2]) from None
    idx += 1

    args: dict[str, list[Span]] = {}
    while idx < len(tokens):
        kind, value, pos = tokens[idx]
        if kind != "tag":
            raise DelinearizeError(f"unexpected text {value.strip()!r}", pos)
        if value == "EV":
            raise DelinearizeError("repeated [EV] tag", pos)
        role = tag_role(value)
        if role is None:
            raise DelinearizeError(f"unknown role tag [{value}]", pos)
        idx += 1
        text = ""
        if idx < len(tokens) and tokens[idx][0] == "text":
            text = tokens[idx][1].strip()
            idx += 1
        args.setdefault(role, []).append(Span(text))

    for role in args:
        parent = parent_role(role)
        if parent is not None and parent not in args:
            raise DelinearizeError(f"sub-role {role!r} without main role {parent!r}", 0)

    event = PharmaEvent(event_type, args)
    validate_event(event)
    return event
