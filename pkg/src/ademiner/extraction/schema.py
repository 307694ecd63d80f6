"""Event schema for pharmacovigilance event extraction.

An event is either an adverse drug event (ADE) or a potential therapeutic
event (PTE) and carries a map from argument roles to extracted text spans.
The role registry is closed: three main roles (subject, treatment, effect)
plus the sub-roles refining subject and treatment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class EventType(Enum):
    ADE = "ADE"
    PTE = "PTE"


MAIN_ROLES = ("subject", "treatment", "effect")

# Closed registry in canonical emission order: each main role followed by its
# sub-roles, effect last.
ROLE_REGISTRY = (
    "subject",
    "subject.age",
    "subject.gender",
    "subject.race",
    "subject.population",
    "subject.disorder",
    "treatment",
    "treatment.drug",
    "treatment.dosage",
    "treatment.route",
    "treatment.frequency",
    "treatment.duration",
    "treatment.time_elapsed",
    "treatment.disorder",
    "treatment.combination",
    "effect",
)

ROLE_ORDER = {role: i for i, role in enumerate(ROLE_REGISTRY)}


def role_tag(role: str) -> str:
    """Text tag for a role: uppercased, dots become underscores."""
    return role.upper().replace(".", "_")


def tag_role(tag: str) -> str | None:
    """Inverse of role_tag; None for tags outside the registry."""
    return _TAG_TO_ROLE.get(tag)


_TAG_TO_ROLE = {role_tag(r): r for r in ROLE_REGISTRY}


def parent_role(role: str) -> str | None:
    """Main role a sub-role belongs to; None for main roles."""
    head, _, rest = role.partition(".")
    return head if rest else None


@dataclass(frozen=True)
class Span:
    """One extracted surface string, optionally anchored in its sentence."""

    text: str
    start: int | None = None
    end: int | None = None


@dataclass
class PharmaEvent:
    event_type: EventType
    args: dict[str, list[Span]] = field(default_factory=dict)


class InvalidEventError(ValueError):
    pass


def validate_event(event: PharmaEvent, require_parents: bool = True) -> None:
    """Check registry membership, non-empty span lists and offset sanity.

    Parent checking is optional because baseline extractors emit sub-roles
    (e.g. treatment.drug) without synthesizing a covering main-role span;
    the linearization codec always enforces parents.
    """
    for role, spans in event.args.items():
        if role not in ROLE_ORDER:
            raise InvalidEventError(f"unknown role {role!r}")
        if not spans:
            raise InvalidEventError(f"role {role!r} has an empty span list")
        parent = parent_role(role)
        if require_parents and parent is not None and parent not in event.args:
            raise InvalidEventError(
                f"sub-role {role!r} present without its main role {parent!r}"
            )
        for span in spans:
            if (span.start is None) != (span.end is None):
                raise InvalidEventError(f"span {span.text!r} has a half-open offset pair")
            if span.start is not None and span.start >= span.end:
                raise InvalidEventError(f"span {span.text!r} offsets are not start < end")
