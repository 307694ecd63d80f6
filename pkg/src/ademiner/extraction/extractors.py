"""Event extractors: a deterministic rule-based baseline and a remote
model adapter.

The rule-based extractor scans a sentence against drug and effect lexicons
(longest match wins, case-insensitive, on word boundaries), an age-phrase
regex family, and a gender keyword set. It emits a single ADE event when at
least one drug and one effect are found, with character offsets for every
span. It exists so the whole pipeline runs deterministically offline; a
fine-tuned neural extractor plugs in through the remote adapter instead.

The remote adapter POSTs ``{"sentence": ..., "model": ...}`` to a configured
endpoint and parses the response through the JSON repair and the event-array
schema. Transport is injectable so tests never touch the network.
"""

from __future__ import annotations

import logging
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import requests

from .jsonrepair import JsonRepairError, repair_json
from .model_json import ModelJsonError, parse_model_json
from .schema import EventType, PharmaEvent, Span

logger = logging.getLogger(__name__)

GENDER_KEYWORDS_MALE = ("man", "male", "boy", "he", "his", "gentleman")
GENDER_KEYWORDS_FEMALE = ("woman", "female", "girl", "she", "her", "lady")

_DECADES = "twenties|thirties|forties|fifties|sixties|seventies|eighties|nineties"

# Age surface forms the baseline recognizes. Kept aligned with what the
# normalizer can map to a value afterwards.
AGE_PATTERNS = [
    re.compile(r"\b\d+(?:\.\d+)?(?:-| )years?(?:-| )old\b", re.IGNORECASE),
    re.compile(r"\b\d+(?:\.\d+)?(?:-| )(?:month|week|day)s?(?:-| )old\b", re.IGNORECASE),
    re.compile(r"\baged \d+(?:\.\d+)?\b", re.IGNORECASE),
    re.compile(r"\b\d+(?:\.\d+)? y/?o\b", re.IGNORECASE),
    re.compile(rf"\bin (?:his|her) (?:{_DECADES})\b", re.IGNORECASE),
]

_GENDER_RE = re.compile(
    r"\b(?:%s)\b" % "|".join(GENDER_KEYWORDS_MALE + GENDER_KEYWORDS_FEMALE),
    re.IGNORECASE,
)


class LexiconError(ValueError):
    pass


def load_lexicon(path: str | Path) -> list[str]:
    """Read one lowercase term per line; '#' starts a comment."""
    terms = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            terms.append(line.lower())
    return terms


@dataclass(frozen=True)
class Lexicons:
    drugs: tuple[str, ...]
    effects: tuple[str, ...]

    @classmethod
    def from_files(cls, drug_path: str | Path, effect_path: str | Path) -> "Lexicons":
        return cls(tuple(load_lexicon(drug_path)), tuple(load_lexicon(effect_path)))


def _lexicon_regex(terms: tuple[str, ...]) -> re.Pattern | None:
    if not terms:
        return None
    # Longest alternative first so the scan prefers "liver failure" over
    # "failure" at the same position; finditer never re-enters a match.
    ordered = sorted(set(terms), key=lambda t: (-len(t), t))
    return re.compile(
        r"\b(?:%s)\b" % "|".join(re.escape(t) for t in ordered), re.IGNORECASE
    )


def _scan(pattern: re.Pattern | None, sentence: str) -> list[Span]:
    if pattern is None:
        return []
    return [Span(m.group(0), m.start(), m.end()) for m in pattern.finditer(sentence)]


class RuleBasedExtractor:
    """Lexicon- and pattern-driven baseline; pure given its lexicons."""

    kind = "rule_based"

    def __init__(self, lexicons: Lexicons):
        self.lexicons = lexicons
        self._drug_re = _lexicon_regex(lexicons.drugs)
        self._effect_re = _lexicon_regex(lexicons.effects)

    def extract(self, sentence: str) -> list[PharmaEvent]:
        drugs = _scan(self._drug_re, sentence)
        effects = _scan(self._effect_re, sentence)
        if not drugs or not effects:
            return []
        args: dict[str, list[Span]] = {
            "treatment.drug": drugs,
            "effect": effects,
        }
        for pattern in AGE_PATTERNS:
            m = pattern.search(sentence)
            if m:
                args["subject.age"] = [Span(m.group(0), m.start(), m.end())]
                break
        g = _GENDER_RE.search(sentence)
        if g:
            args["subject.gender"] = [Span(g.group(0), g.start(), g.end())]
        return [PharmaEvent(EventType.ADE, args)]


class RemoteExtractorError(RuntimeError):
    def __init__(self, message: str, retriable: bool = False, raw_body: str | None = None):
        super().__init__(message)
        self.retriable = retriable
        self.raw_body = raw_body


# transport(url, payload, timeout) -> (status_code, body_text)
Transport = Callable[[str, dict, float], tuple[int, str]]


def _requests_transport(url: str, payload: dict, timeout: float) -> tuple[int, str]:
    resp = requests.post(url, json=payload, timeout=timeout)
    return resp.status_code, resp.text


@dataclass
class RemoteExtractor:
    """Adapter for an annotation model served over HTTP."""

    endpoint: str
    model: str
    timeout: float = 30.0
    max_in_flight: int = 4
    transport: Transport = field(default=_requests_transport, repr=False)

    kind = "remote"

    def __post_init__(self):
        if not self.endpoint:
            raise ValueError("remote extractor requires an endpoint URL")
        self._gate = threading.Semaphore(self.max_in_flight)

    def extract(self, sentence: str) -> list[PharmaEvent]:
        events, _warnings, _raw = self.extract_with_raw(sentence)
        return events

    def extract_with_raw(self, sentence: str) -> tuple[list[PharmaEvent], list[str], str]:
        payload = {"sentence": sentence, "model": self.model}
        with self._gate:
            try:
                status, body = self.transport(self.endpoint, payload, self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                raise RemoteExtractorError(str(exc), retriable=True) from exc
        if status != 200:
            raise RemoteExtractorError(
                f"remote extractor returned HTTP {status}", retriable=status >= 500
            )
        try:
            events, warnings = parse_model_json(repair_json(body))
        except (JsonRepairError, ModelJsonError, ValueError) as exc:
            raise RemoteExtractorError(
                f"unparseable model output: {exc}", raw_body=body
            ) from exc
        for w in warnings:
            logger.warning("%s", w)
        return events, warnings, body
