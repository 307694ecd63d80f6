"""Event schema, tagged-sequence codec, JSON repair, and extractors."""

from .extractors import (
    Lexicons,
    RemoteExtractor,
    RemoteExtractorError,
    RuleBasedExtractor,
    load_lexicon,
)
from .jsonrepair import JsonRepairError, repair_json
from .linearize import DelinearizeError, delinearize, linearize
from .model_json import (
    ModelJsonError,
    event_to_obj,
    events_from_obj,
    events_to_json,
    parse_model_json,
)
from .schema import (
    EventType,
    InvalidEventError,
    MAIN_ROLES,
    PharmaEvent,
    ROLE_REGISTRY,
    Span,
    parent_role,
    role_tag,
    validate_event,
)

__all__ = [
    "DelinearizeError",
    "EventType",
    "InvalidEventError",
    "JsonRepairError",
    "Lexicons",
    "MAIN_ROLES",
    "ModelJsonError",
    "PharmaEvent",
    "ROLE_REGISTRY",
    "RemoteExtractor",
    "RemoteExtractorError",
    "RuleBasedExtractor",
    "Span",
    "delinearize",
    "event_to_obj",
    "events_from_obj",
    "events_to_json",
    "linearize",
    "load_lexicon",
    "parent_role",
    "parse_model_json",
    "repair_json",
    "role_tag",
    "validate_event",
]
