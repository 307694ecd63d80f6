"""Normalization of free-text argument spans.

Extracted spans are rich free text ("a 45-year-old woman", "Aspirin 100 mg
oral"). Search needs canonical values, so ages map to a year value or range,
genders to a closed enum, and drug/effect terms to cleaned lowercase strings
run through a synonym dictionary. Every rule here is an explicit table so the
whole chain stays deterministic and testable offline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class NormalizationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Age


@dataclass(frozen=True)
class AgeValue:
    """Age in fractional years: an exact point, a range, or unknown.

    Ranges are closed by default; ``hi_open`` marks a half-open upper bound
    (the life-stage table uses it so "child" means [2, 12)).
    """

    kind: str  # "exact" | "range" | "unknown"
    years_lo: float | None = None
    years_hi: float | None = None
    hi_open: bool = False

    def __post_init__(self):
        if self.kind == "unknown":
            if self.years_lo is not None or self.years_hi is not None:
                raise NormalizationError("unknown age carries no bounds")
        else:
            if self.years_lo is None or self.years_hi is None:
                raise NormalizationError("exact/range age requires bounds")
            if not (0 <= self.years_lo <= self.years_hi <= 150):
                raise NormalizationError(
                    f"age bounds out of order or range: {self.years_lo}..{self.years_hi}"
                )
            if self.kind == "exact" and self.years_lo != self.years_hi:
                raise NormalizationError("exact age must have lo == hi")

    @classmethod
    def exact(cls, years: float) -> "AgeValue":
        return cls("exact", years, years)

    @classmethod
    def range(cls, lo: float, hi: float, hi_open: bool = False) -> "AgeValue":
        return cls("range", lo, hi, hi_open)

    @classmethod
    def unknown(cls) -> "AgeValue":
        return cls("unknown")

    def contains(self, years: float) -> bool:
        if self.kind == "unknown":
            return False
        if self.hi_open:
            return self.years_lo <= years < self.years_hi
        return self.years_lo <= years <= self.years_hi

    def canonical_text(self) -> str:
        """A phrase normalize_age maps back onto this value."""
        if self.kind == "unknown":
            return "unknown"
        if self.kind == "exact":
            return f"{_fmt_years(self.years_lo)} years old"
        key = (self.years_lo, self.years_hi, self.hi_open)
        if key in _STAGE_BY_VALUE:
            return _STAGE_BY_VALUE[key]
        if not self.hi_open and self.years_hi == self.years_lo + 9:
            word = _DECADE_BY_LO.get(self.years_lo)
            if word:
                return f"in his {word}"
        return f"{_fmt_years(self.years_lo)}-{_fmt_years(self.years_hi)} years"


def _fmt_years(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


_NUM = r"(\d+(?:\.\d+)?)"
_EXACT_PATTERNS = [
    re.compile(rf"{_NUM}(?:-| )years?(?:-| )old", re.IGNORECASE),
    re.compile(rf"aged {_NUM}", re.IGNORECASE),
    re.compile(rf"{_NUM} y/o", re.IGNORECASE),
    re.compile(rf"{_NUM} yo\b", re.IGNORECASE),
]
_UNIT_PATTERNS = [
    (re.compile(rf"{_NUM}(?:-| )months?(?:(?:-| )old)?", re.IGNORECASE), 12.0),
    (re.compile(rf"{_NUM}(?:-| )weeks?(?:(?:-| )old)?", re.IGNORECASE), 52.0),
    (re.compile(rf"{_NUM}(?:-| )days?(?:(?:-| )old)?", re.IGNORECASE), 365.0),
]
_DECADES = {
    "twenties": 20, "thirties": 30, "forties": 40, "fifties": 50,
    "sixties": 60, "seventies": 70, "eighties": 80, "nineties": 90,
}
_DECADE_BY_LO = {float(v): k for k, v in _DECADES.items()}
_DECADE_RE = re.compile(
    r"in (?:his|her) (%s)" % "|".join(_DECADES), re.IGNORECASE
)
# Life-stage vocabulary; upper bounds are open except for the two stages
# that are closed descriptions of a span of months, and elderly.
_STAGES: dict[str, AgeValue] = {
    "neonate": AgeValue.range(0.0, 0.077),
    "infant": AgeValue.range(0.0, 2.0),
    "child": AgeValue.range(2.0, 12.0, hi_open=True),
    "adolescent": AgeValue.range(12.0, 18.0, hi_open=True),
    "teenager": AgeValue.range(12.0, 18.0, hi_open=True),
    "adult": AgeValue.range(18.0, 65.0, hi_open=True),
    "elderly": AgeValue.range(65.0, 150.0),
}
_STAGE_BY_VALUE = {}
for _word, _val in _STAGES.items():
    _STAGE_BY_VALUE.setdefault((_val.years_lo, _val.years_hi, _val.hi_open), _word)
_STAGE_RE = re.compile(r"\b(%s)s?\b" % "|".join(_STAGES), re.IGNORECASE)


def normalize_age(span: str) -> AgeValue:
    """Map an age phrase to a value by the fixed rule table, in rule order:
    exact year phrases, month/week/day scaling, decade phrases, life-stage
    words; anything else is unknown."""
    for pattern in _EXACT_PATTERNS:
        m = pattern.search(span)
        if m:
            return AgeValue.exact(float(m.group(1)))
    for pattern, divisor in _UNIT_PATTERNS:
        m = pattern.search(span)
        if m:
            return AgeValue.exact(float(m.group(1)) / divisor)
    m = _DECADE_RE.search(span)
    if m:
        lo = _DECADES[m.group(1).lower()]
        return AgeValue.range(float(lo), float(lo + 9))
    m = _STAGE_RE.search(span)
    if m:
        return _STAGES[m.group(1).lower()]
    return AgeValue.unknown()


# ---------------------------------------------------------------------------
# Gender


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


_MALE_RE = re.compile(r"\b(?:man|male|boy|he|his|gentleman)\b", re.IGNORECASE)
_FEMALE_RE = re.compile(r"\b(?:woman|female|girl|she|her|lady)\b", re.IGNORECASE)


def normalize_gender(span: str) -> Gender:
    """Keyword vote on word boundaries; conflicting or absent hits are
    unknown."""
    male = bool(_MALE_RE.search(span))
    female = bool(_FEMALE_RE.search(span))
    if male and not female:
        return Gender.MALE
    if female and not male:
        return Gender.FEMALE
    return Gender.UNKNOWN


# ---------------------------------------------------------------------------
# Drug / effect terms


_DOSE_RE = re.compile(r"[0-9]+(\.[0-9]+)? ?(mg|g|mcg|µg|ml|iu)(/\w+)?\b", re.IGNORECASE)
_TRAILING_TOKENS = {
    "tablet", "tablets", "capsule", "capsules", "injection",
    "oral", "iv", "intravenous",
}
_EDGE_PUNCT = "\"'`.,;:!?()[]{}<>-–—*"


def normalize_term(span: str, kind: str = "drug", synonyms: dict[str, str] | None = None) -> str:
    """Clean a drug or effect span and resolve it through the synonym table.

    Lowercase, strip surrounding punctuation and quotes, collapse internal
    whitespace, remove dose expressions and trailing form/route tokens, then
    look the result up in the synonym dictionary; unknown terms pass through
    cleaned. A span that cleans away to nothing raises NormalizationError.
    """
    if kind not in ("drug", "effect"):
        raise ValueError(f"unknown term kind {kind!r}")
    cleaned = span.lower()
    cleaned = _DOSE_RE.sub(" ", cleaned)
    cleaned = " ".join(cleaned.split()).strip(_EDGE_PUNCT + " ")
    tokens = cleaned.split()
    while tokens and tokens[-1].strip(_EDGE_PUNCT) in _TRAILING_TOKENS:
        tokens.pop()
    cleaned = " ".join(tokens).strip(_EDGE_PUNCT + " ")
    cleaned = " ".join(cleaned.split())
    if not cleaned:
        raise NormalizationError(f"term span {span!r} cleaned to nothing")
    if synonyms:
        return synonyms.get(cleaned, cleaned)
    return cleaned


class SynonymLoadError(ValueError):
    pass


def load_synonyms(path: str | Path) -> dict[str, str]:
    """Load ``synonym<TAB>canonical`` lines; a duplicate synonym is a load
    error naming the line."""
    table: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise SynonymLoadError(f"line {lineno}: expected synonym<TAB>canonical")
        synonym, canonical = line.split("\t", 1)
        synonym = synonym.strip().lower()
        canonical = canonical.strip().lower()
        if not synonym or not canonical:
            raise SynonymLoadError(f"line {lineno}: empty synonym or canonical")
        if synonym in table:
            raise SynonymLoadError(f"line {lineno}: duplicate synonym {synonym!r}")
        table[synonym] = canonical
    return table
