"""REST service: search, statistics, articles, drug info, and annotation.

Search and statistics delegate to the in-memory index; the FAERS source is
routed through the OpenFDA client and converted onto the shared axes so both
sources chart identically. Annotation endpoints run the configured
extractors; uploaded text lives only in the volatile session store. Every
error body has the shape ``{"error": ..., "code": ...}``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..corpus import CaseReport, parse_corpus
from ..extraction import (
    Lexicons,
    RemoteExtractor,
    RemoteExtractorError,
    RuleBasedExtractor,
    event_to_obj,
    events_to_json,
)
from ..faers import FaersClient, FaersError, FaersQuery, FaersQuotaError
from ..normalize import Gender, load_synonyms
from ..records import read_records
from ..resources import (
    DRUG_INFO,
    DRUG_LEXICON,
    EFFECT_LEXICON,
    PRELOADED,
    SYNONYMS,
    data_path,
)
from ..search import (
    AgeGroup,
    Index,
    QuerySpec,
    build_index,
    cross_breakdown,
    demographic_distribution,
    group_breakdown,
    search_articles,
    suggest_terms,
    top_cooccurring,
    yearly_counts,
)
from . import views
from .sessions import PRELOADED_SESSION_ID, SessionGone, SessionStore

logger = logging.getLogger(__name__)

RULE_MODEL = "rule"


@dataclass
class ServiceConfig:
    records_path: str | Path
    corpus_path: str | Path | None = None
    druginfo_path: str | Path | None = None
    preloaded_path: str | Path | None = None
    drug_lexicon_path: str | Path | None = None
    effect_lexicon_path: str | Path | None = None
    synonyms_path: str | Path | None = None
    faers_mode: str = "fixture"
    faers_fixture_dir: str | Path | None = None
    remote_extractor_url: str | None = None
    remote_models: list[str] = field(default_factory=list)
    remote_timeout: float = 30.0
    session_ttl: float = 30 * 60
    upload_line_limit: int = 1000
    default_page_size: int = 20


def _http_error(status: int, message: str, **extra) -> HTTPException:
    return HTTPException(status_code=status, detail={"message": message, **extra})


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="ademiner", docs_url=None, redoc_url=None)

    records = read_records(config.records_path)
    index: Index = build_index(records)

    corpus_by_pmid: dict[str, CaseReport] = {}
    if config.corpus_path:
        with open(config.corpus_path, encoding="utf-8") as fh:
            reports, _stats = parse_corpus(fh)
        corpus_by_pmid = {r.pmid: r for r in reports}

    druginfo_path = Path(config.druginfo_path) if config.druginfo_path else data_path(DRUG_INFO)
    druginfo: dict[str, dict] = json.loads(druginfo_path.read_text(encoding="utf-8"))
    druginfo = {k.lower(): v for k, v in druginfo.items()}

    synonyms = load_synonyms(config.synonyms_path or data_path(SYNONYMS))
    lexicons = Lexicons.from_files(
        config.drug_lexicon_path or data_path(DRUG_LEXICON),
        config.effect_lexicon_path or data_path(EFFECT_LEXICON),
    )
    extractors: dict[str, object] = {RULE_MODEL: RuleBasedExtractor(lexicons)}
    for model in config.remote_models:
        if not config.remote_extractor_url:
            raise ValueError("remote models configured without remote_extractor_url")
        extractors[model] = RemoteExtractor(
            endpoint=config.remote_extractor_url,
            model=model,
            timeout=config.remote_timeout,
        )

    sessions = SessionStore(ttl_seconds=config.session_ttl)
    preloaded_path = (
        Path(config.preloaded_path) if config.preloaded_path else data_path(PRELOADED)
    )
    preloaded = json.loads(preloaded_path.read_text(encoding="utf-8"))
    sessions.add_preloaded(preloaded["sentences"], preloaded["annotations"])

    faers: FaersClient | None = None
    if config.faers_mode == "live" or config.faers_fixture_dir:
        faers = FaersClient(
            mode=config.faers_mode,
            fixture_dir=config.faers_fixture_dir,
        )

    app.state.index = index
    app.state.sessions = sessions
    app.state.config = config
    app.state.faers = faers

    # -- error shape ----------------------------------------------------

    @app.exception_handler(HTTPException)
    async def _on_http_error(_request: Request, exc: HTTPException):
        detail = exc.detail
        if isinstance(detail, dict):
            body = {"error": detail.pop("message", "error"), "code": exc.status_code}
            body.update(detail)
        else:
            body = {"error": str(detail), "code": exc.status_code}
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": str(exc.errors()), "code": 400}
        )

    # -- query plumbing --------------------------------------------------

    def parse_query(request: Request) -> QuerySpec:
        params = request.query_params
        terms = params.getlist("term")
        if not terms:
            raise _http_error(400, "at least one term is required")
        kind = params.get("kind", "drug")
        age = params.get("age")
        age_group_id = params.get("age_group")
        if age is not None and age_group_id is not None:
            raise _http_error(400, "age and age_group are mutually exclusive")
        year_from, year_to = params.get("year_from"), params.get("year_to")
        year_range = None
        if year_from is not None or year_to is not None:
            year_range = (int(year_from or 0), int(year_to or 9999))
        try:
            return QuerySpec(
                kind=kind,
                terms=list(terms),
                cofilter=params.getlist("cofilter"),
                age_exact=float(age) if age is not None else None,
                age_group=AgeGroup(age_group_id) if age_group_id else None,
                gender=Gender(params["gender"]) if "gender" in params else None,
                year_range=year_range,
            )
        except ValueError as exc:
            raise _http_error(400, str(exc)) from exc

    def page_params(request: Request) -> tuple[int, int]:
        params = request.query_params
        try:
            offset = int(params.get("offset", 0))
            page_size = int(params.get("page_size", config.default_page_size))
        except ValueError as exc:
            raise _http_error(400, "offset and page_size must be integers") from exc
        if offset < 0 or page_size < 1:
            raise _http_error(400, "offset must be >= 0 and page_size >= 1")
        return offset, page_size

    def faers_client() -> FaersClient:
        if faers is None:
            raise _http_error(503, "FAERS source is not configured",
                              source="faers", degraded=True)
        return faers

    def run_faers(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FaersQuotaError as exc:
            raise _http_error(503, str(exc), source="faers", degraded=True) from exc
        except FaersError as exc:
            raise _http_error(502, str(exc), source="faers") from exc

    def faers_base_query(request: Request) -> tuple[str, str, str, dict]:
        """kind, term, drug name type, and shared FAERS filters."""
        params = request.query_params
        terms = params.getlist("term")
        if not terms:
            raise _http_error(400, "at least one term is required")
        if len(terms) > 1:
            raise _http_error(400, "the FAERS source supports a single term")
        kind = params.get("kind", "drug")
        if kind not in ("drug", "effect"):
            raise _http_error(400, f"unknown kind {kind!r}")
        name_type = params.get("drug_name_type", "generic")
        if name_type not in ("generic", "brand"):
            raise _http_error(400, f"unknown drug_name_type {name_type!r}")
        filters: dict = {}
        if "gender" in params:
            if params["gender"] not in ("male", "female"):
                raise _http_error(400, "FAERS gender filter must be male or female")
            filters["sex"] = params["gender"]
        age = params.get("age")
        age_group_id = params.get("age_group")
        if age is not None and age_group_id is not None:
            raise _http_error(400, "age and age_group are mutually exclusive")
        if age is not None:
            x = float(age)
            filters["age_range"] = (x, x)
        elif age_group_id:
            try:
                filters.update(views.faers_group_filters(age_group_id))
            except ValueError as exc:
                raise _http_error(400, str(exc)) from exc
        if "year_from" in params or "year_to" in params:
            y0 = params.get("year_from", "1900")
            y1 = params.get("year_to", "2100")
            filters["date_range"] = (f"{int(y0):04d}0101", f"{int(y1):04d}1231")
        return kind, terms[0], name_type, filters

    # -- search ----------------------------------------------------------

    @app.get("/api/suggest")
    def suggest(kind: str, prefix: str):
        if kind not in ("drug", "effect"):
            raise _http_error(400, f"unknown kind {kind!r}")
        if not prefix:
            raise _http_error(400, "prefix must be at least one character")
        return {"suggestions": suggest_terms(index, kind, prefix)}

    @app.get("/api/search")
    def search(request: Request):
        source = request.query_params.get("source", "pubmed")
        offset, page_size = page_params(request)
        if source == "faers":
            kind, term, name_type, filters = faers_base_query(request)
            fkind = views.faers_query_kind(kind, name_type)
            series = run_faers(
                faers_client().fetch_counts,
                FaersQuery(kind=fkind, term=term, count_field="receivedate", **filters),
            )
            yearly = views.yearly_from_receivedate(series)
            tops = run_faers(
                faers_client().fetch_counts,
                FaersQuery(
                    kind=fkind,
                    term=term,
                    count_field=views.faers_opposite_count_field(kind, name_type),
                    limit=50,
                    **filters,
                ),
            )
            ranked = views.rank_counts(tops.entries, 50)
            return {
                "source": "faers",
                "pmids": [],
                "total": sum(yearly.values()),
                "yearly": {str(y): c for y, c in yearly.items()},
                "top_terms": views.ranked_terms_payload(ranked),
            }
        if source != "pubmed":
            raise _http_error(400, f"unknown source {source!r}")
        q = parse_query(request)
        pmids = search_articles(index, q)
        return {
            "source": "pubmed",
            "pmids": pmids[offset : offset + page_size],
            "total": len(pmids),
            "yearly": {str(y): c for y, c in yearly_counts(index, q).items()},
            "top_terms": views.ranked_terms_payload(top_cooccurring(index, q)),
        }

    @app.get("/api/demographics")
    def demographics(request: Request):
        source = request.query_params.get("source", "pubmed")
        if source == "faers":
            kind, term, name_type, _filters = faers_base_query(request)
            cells = run_faers(views.faers_demographics, faers_client(), kind, term, name_type)
            return {"source": "faers", "cells": cells, "total": sum(cells.values())}
        if source != "pubmed":
            raise _http_error(400, f"unknown source {source!r}")
        q = parse_query(request)
        dist = demographic_distribution(index, q)
        cells = {views.cell_key(g, s): c for (g, s), c in sorted(
            dist.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value)
        )}
        return {"source": "pubmed", "cells": cells, "total": sum(cells.values())}

    def parse_group(request: Request) -> AgeGroup | Gender:
        params = request.query_params
        group_kind = params.get("group_kind", "age")
        group_id = params.get("group")
        if not group_id:
            raise _http_error(400, "group is required")
        try:
            if group_kind == "age":
                return AgeGroup(group_id)
            if group_kind == "gender":
                return Gender(group_id)
        except ValueError:
            raise _http_error(400, f"unknown group {group_id!r}") from None
        raise _http_error(400, f"unknown group_kind {group_kind!r}")

    @app.get("/api/breakdown")
    def breakdown(request: Request):
        source = request.query_params.get("source", "pubmed")
        n = int(request.query_params.get("n", 10))
        if source == "faers":
            kind, term, name_type, _filters = faers_base_query(request)
            group_id = request.query_params.get("group")
            if not group_id:
                raise _http_error(400, "group is required")
            try:
                group_filters = views.faers_group_filters(group_id)
            except ValueError as exc:
                raise _http_error(400, str(exc)) from exc
            result = run_faers(
                faers_client().fetch_counts,
                FaersQuery(
                    kind=views.faers_query_kind(kind, name_type),
                    term=term,
                    count_field=views.faers_opposite_count_field(kind, name_type),
                    limit=n,
                    **group_filters,
                ),
            )
            ranked = views.rank_counts(result.entries, n)
            return {"source": "faers", "group": group_id,
                    "terms": views.ranked_terms_payload(ranked)}
        if source != "pubmed":
            raise _http_error(400, f"unknown source {source!r}")
        q = parse_query(request)
        group = parse_group(request)
        ranked = group_breakdown(index, q, group, n)
        return {"source": "pubmed", "group": group.value,
                "terms": views.ranked_terms_payload(ranked)}

    @app.get("/api/crossbreakdown")
    def crossbreakdown(request: Request):
        source = request.query_params.get("source", "pubmed")
        k = int(request.query_params.get("k", 10))
        if source == "faers":
            kind, term, name_type, _filters = faers_base_query(request)
            cells: dict[str, list] = {}
            for group, _lo, _hi in views.AGE_GROUP_BOUNDS:
                for sex in ("male", "female"):
                    filters = views.faers_group_filters(group.value)
                    result = run_faers(
                        faers_client().fetch_counts,
                        FaersQuery(
                            kind=views.faers_query_kind(kind, name_type),
                            term=term,
                            count_field=views.faers_opposite_count_field(kind, name_type),
                            limit=k,
                            sex=sex,
                            **filters,
                        ),
                    )
                    if result.entries:
                        ranked = views.rank_counts(result.entries, k)
                        cells[f"{group.value}|{sex}"] = views.ranked_terms_payload(ranked)
            return {"source": "faers", "cells": cells}
        if source != "pubmed":
            raise _http_error(400, f"unknown source {source!r}")
        q = parse_query(request)
        cross = cross_breakdown(index, q, k)
        return {
            "source": "pubmed",
            "cells": {
                views.cell_key(g, s): views.ranked_terms_payload(ranked)
                for (g, s), ranked in sorted(
                    cross.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value)
                )
            },
        }

    @app.get("/api/articles")
    def articles(request: Request):
        q = parse_query(request)
        offset, page_size = page_params(request)
        pmids = search_articles(index, q)
        terms = q.terms + q.cofilter
        page = pmids[offset : offset + page_size]
        return {
            "total": len(pmids),
            "articles": [
                views.article_view(corpus_by_pmid.get(pmid), pmid, terms) for pmid in page
            ],
        }

    @app.get("/api/druginfo")
    def drug_info(name: str):
        card = druginfo.get(" ".join(name.lower().split()))
        if card is None:
            raise _http_error(404, f"no drug information for {name!r}")
        return card

    # -- annotation -------------------------------------------------------

    def get_extractor(model: str):
        extractor = extractors.get(model)
        if extractor is None:
            raise _http_error(
                400, f"unknown model {model!r}", available=sorted(extractors)
            )
        return extractor

    def annotate_sentence(model: str, sentence: str) -> tuple[list[dict], str]:
        extractor = get_extractor(model)
        if isinstance(extractor, RemoteExtractor):
            try:
                events, _warnings, raw = extractor.extract_with_raw(sentence)
            except RemoteExtractorError as exc:
                raise _http_error(502, str(exc), retriable=exc.retriable) from exc
            return [event_to_obj(e) for e in events], raw
        events = extractor.extract(sentence)
        return [event_to_obj(e) for e in events], events_to_json(events)

    @app.post("/api/annotate/live")
    async def annotate_live(request: Request):
        body = await request.json()
        sentence = (body.get("sentence") or "").strip()
        model = body.get("model", RULE_MODEL)
        if not sentence:
            raise _http_error(400, "sentence must be non-empty")
        events, raw = annotate_sentence(model, sentence)
        return {"model": model, "events": events, "raw": raw}

    @app.post("/api/annotate/bulk")
    async def bulk_upload(request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        sentences = [line.strip() for line in text.splitlines() if line.strip()]
        if not sentences:
            raise _http_error(400, "upload contained no sentences")
        if len(sentences) > config.upload_line_limit:
            raise _http_error(
                413,
                f"upload exceeds the {config.upload_line_limit}-line limit",
            )
        sid = sessions.create(sentences)
        return {"session_id": sid, "sentences": len(sentences)}

    def get_session(sid: str):
        try:
            return sessions.get(sid)
        except SessionGone:
            raise _http_error(410, f"session {sid!r} is unknown or expired") from None

    def session_annotations(session, model: str) -> list[list[dict]]:
        if session.readonly:
            if model not in session.annotations:
                raise _http_error(
                    400, f"unknown model {model!r}",
                    available=sorted(session.annotations),
                )
            return session.annotations[model]
        if model not in session.annotations:
            rows = [annotate_sentence(model, s)[0] for s in session.sentences]
            session.annotations[model] = rows
        return session.annotations[model]

    def filter_rows(
        session, per_model: dict[str, list[list[dict]]],
        filter_role: str | None, filter_span: str | None,
    ) -> list[dict]:
        def matches(events: list[dict]) -> bool:
            if filter_role:
                if not any(filter_role in e.get("arguments", {}) for e in events):
                    return False
            if filter_span:
                needle = filter_span.lower()
                spans = [
                    s
                    for e in events
                    for spans_ in e.get("arguments", {}).values()
                    for s in spans_
                ]
                if not any(needle in s.lower() for s in spans):
                    return False
            return True

        rows = []
        for i, sentence in enumerate(session.sentences):
            cells = {name: annos[i] for name, annos in per_model.items()}
            if filter_role or filter_span:
                if not any(matches(events) for events in cells.values()):
                    continue
            row = {"line": i, "sentence": sentence}
            row.update(cells)
            rows.append(row)
        return rows

    @app.get("/api/annotate/bulk/{sid}")
    def bulk_results(sid: str, request: Request):
        session = get_session(sid)
        model = request.query_params.get("model")
        if not model:
            available = (
                sorted(session.annotations) if session.readonly else sorted(extractors)
            )
            raise _http_error(400, "model is required", available=available)
        offset, page_size = page_params(request)
        annos = session_annotations(session, model)
        rows = filter_rows(
            session,
            {"events": annos},
            request.query_params.get("filter_role"),
            request.query_params.get("filter_span"),
        )
        return {
            "session_id": sid,
            "model": model,
            "pending": 0.0,
            "total": len(rows),
            "rows": rows[offset : offset + page_size],
        }

    @app.post("/api/annotate/bulk/{sid}/compare")
    async def bulk_compare(sid: str, request: Request):
        session = get_session(sid)
        body = await request.json()
        model_a, model_b = body.get("model_a"), body.get("model_b")
        if not model_a or not model_b:
            raise _http_error(400, "model_a and model_b are required")
        annos = {
            "events_a": session_annotations(session, model_a),
            "events_b": session_annotations(session, model_b),
        }
        rows = filter_rows(
            session, annos, body.get("filter_role"), body.get("filter_span")
        )
        offset = int(body.get("offset", 0))
        page_size = int(body.get("page_size", config.default_page_size))
        return {
            "session_id": sid,
            "model_a": model_a,
            "model_b": model_b,
            "pending": 0.0,
            "total": len(rows),
            "rows": rows[offset : offset + page_size],
        }

    return app
