"""Client for the OpenFDA drug adverse-event endpoint.

Builds count/time-series queries as byte-stable URLs, executes them with
retry-on-429, and parses the count responses. A recorded-fixture mode keyed
by sha1(url) replays saved responses so tests and offline deployments never
touch the network; the transport is injectable so that property is
enforceable in tests.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import requests

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.fda.gov"
API_KEY_ENV = "OPENFDA_API_KEY"

SEARCH_FIELDS = {
    "generic_name": "patient.drug.openfda.generic_name",
    "brand_name": "patient.drug.openfda.brand_name",
    "reaction": "patient.reaction.reactionmeddrapt",
}

# Aggregation targets; term counts use the .exact (non-tokenized) variant.
COUNT_FIELDS = {
    "reaction": "patient.reaction.reactionmeddrapt.exact",
    "generic_name": "patient.drug.openfda.generic_name.exact",
    "brand_name": "patient.drug.openfda.brand_name.exact",
    "receivedate": "receivedate",
    "onset_age": "patient.patientonsetage",
    "sex": "patient.patientsex",
}

SEX_CODES = {"male": 1, "female": 2}

# patient.patientonsetageunit coding and the factor to years.
AGE_UNIT_CODES = {"decade": 800, "year": 801, "month": 802, "week": 803, "day": 804, "hour": 805}
AGE_UNIT_TO_YEARS = {
    800: 10.0,
    801: 1.0,
    802: 1.0 / 12.0,
    803: 1.0 / 52.0,
    804: 1.0 / 365.0,
    805: 1.0 / (365.0 * 24.0),
}


class FaersError(RuntimeError):
    pass


class FaersQuotaError(FaersError):
    """Rate limit exhausted after retries; the UI degrades its panel."""


class FixtureMissError(FaersError):
    def __init__(self, url: str):
        super().__init__(f"no recorded fixture for {url}")
        self.url = url


@dataclass(frozen=True)
class FaersQuery:
    kind: str  # "generic_name" | "brand_name" | "reaction"
    term: str
    count_field: str  # key into COUNT_FIELDS
    limit: int = 50
    sex: str | None = None  # "male" | "female"
    age_range: tuple[float, float] | None = None  # in age_unit units
    age_unit: str = "year"
    country: str | None = None
    date_range: tuple[str, str] | None = None  # YYYYMMDD strings

    def __post_init__(self):
        if self.kind not in SEARCH_FIELDS:
            raise ValueError(f"unknown search kind {self.kind!r}")
        if self.count_field not in COUNT_FIELDS:
            raise ValueError(f"unknown count field {self.count_field!r}")
        if not self.term:
            raise ValueError("term must be non-empty")
        if not 1 <= self.limit <= 1000:
            raise ValueError("limit must be in [1, 1000]")
        if self.sex is not None and self.sex not in SEX_CODES:
            raise ValueError(f"unknown sex {self.sex!r}")
        if self.age_unit not in AGE_UNIT_CODES:
            raise ValueError(f"unknown age unit {self.age_unit!r}")


def _quote_phrase(term: str) -> str:
    """URL-encode a quoted search phrase; spaces become '+'."""
    out = []
    for ch in term:
        if ch == " ":
            out.append("+")
        elif ch.isalnum() or ch in "-_.~":
            out.append(ch)
        else:
            out.append("".join(f"%{b:02X}" for b in ch.encode("utf-8")))
    return "".join(out)


def build_count_request(q: FaersQuery, base_url: str = DEFAULT_BASE_URL) -> str:
    """Render the query as its canonical URL; identical queries render
    identical bytes."""
    clauses = [f'{SEARCH_FIELDS[q.kind]}:"{_quote_phrase(q.term)}"']
    if q.sex is not None:
        clauses.append(f"patient.patientsex:{SEX_CODES[q.sex]}")
    if q.age_range is not None:
        lo, hi = q.age_range
        clauses.append(f"patient.patientonsetage:[{_fmt_num(lo)}+TO+{_fmt_num(hi)}]")
        clauses.append(f"patient.patientonsetageunit:{AGE_UNIT_CODES[q.age_unit]}")
    if q.country is not None:
        clauses.append(f'occurcountry:"{_quote_phrase(q.country)}"')
    if q.date_range is not None:
        clauses.append(f"receivedate:[{q.date_range[0]}+TO+{q.date_range[1]}]")

    url = f"{base_url}/drug/event.json?search={'+AND+'.join(clauses)}"
    url += f"&count={COUNT_FIELDS[q.count_field]}"
    if q.count_field != "receivedate":
        url += f"&limit={q.limit}"
    return url


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class FaersCountResult:
    entries: list[tuple[str, int]]  # (term or time bucket, count)
    total: int | None = None
    disclaimer: str = ""


def parse_count_response(body: str) -> FaersCountResult:
    """Parse the endpoint's count-response shape; entries keep response
    order."""
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise FaersError(f"response is not JSON: {exc}") from exc
    if not isinstance(obj, dict) or "results" not in obj:
        raise FaersError("response has no 'results' field")
    entries: list[tuple[str, int]] = []
    for item in obj["results"]:
        key = item.get("term", item.get("time"))
        if key is None or "count" not in item:
            raise FaersError(f"malformed count entry: {item!r}")
        entries.append((str(key), int(item["count"])))
    meta = obj.get("meta", {})
    results_meta = meta.get("results", {}) if isinstance(meta, dict) else {}
    total = results_meta.get("total") if isinstance(results_meta, dict) else None
    disclaimer = meta.get("disclaimer", "") if isinstance(meta, dict) else ""
    return FaersCountResult(entries=entries, total=total, disclaimer=disclaimer)


# transport(url, timeout) -> (status_code, body_text)
Transport = Callable[[str, float], tuple[int, str]]


def _requests_transport(url: str, timeout: float) -> tuple[int, str]:
    resp = requests.get(url, timeout=timeout)
    return resp.status_code, resp.text


def fixture_path(fixture_dir: str | Path, url: str) -> Path:
    return Path(fixture_dir) / (hashlib.sha1(url.encode("utf-8")).hexdigest() + ".json")


@dataclass
class FaersClient:
    mode: str = "fixture"  # "live" | "fixture"
    fixture_dir: str | Path | None = None
    base_url: str = DEFAULT_BASE_URL
    timeout: float = 10.0
    max_tries: int = 3
    backoff: float = 1.0
    api_key: str | None = None
    transport: Transport = field(default=_requests_transport, repr=False)
    sleep: Callable[[float], None] = field(default=time.sleep, repr=False)

    def __post_init__(self):
        if self.mode not in ("live", "fixture"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "fixture" and self.fixture_dir is None:
            raise ValueError("fixture mode requires fixture_dir")
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV)

    def build_url(self, q: FaersQuery) -> str:
        return build_count_request(q, self.base_url)

    def fetch_counts(self, q: FaersQuery) -> FaersCountResult:
        url = self.build_url(q)
        if self.mode == "fixture":
            path = fixture_path(self.fixture_dir, url)
            if not path.exists():
                raise FixtureMissError(url)
            return parse_count_response(path.read_text(encoding="utf-8"))

        request_url = url if not self.api_key else f"{url}&api_key={self.api_key}"
        last_status = None
        for attempt in range(self.max_tries):
            status, body = self.transport(request_url, self.timeout)
            if status == 200:
                return parse_count_response(body)
            last_status = status
            if status == 429 and attempt + 1 < self.max_tries:
                delay = self.backoff * (2**attempt)
                logger.info("rate limited; retrying in %.1fs", delay)
                self.sleep(delay)
                continue
            break
        if last_status == 429:
            raise FaersQuotaError("rate limit exhausted after retries")
        raise FaersError(f"request failed with HTTP {last_status}")

    def record_fixture(self, q: FaersQuery, body: str) -> Path:
        """Save a response body under the query's URL key (test/tooling aid)."""
        if self.fixture_dir is None:
            raise ValueError("no fixture_dir configured")
        path = fixture_path(self.fixture_dir, self.build_url(q))
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(body, encoding="utf-8")
        return path
