"""Command-line entry points: ingest, serve, eval."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .classify import train_baseline
from .corpus import parse_corpus
from .extraction import Lexicons, RemoteExtractor, RuleBasedExtractor, events_from_obj
from .normalize import load_synonyms
from .pipeline import run_pipeline
from .records import append_records, read_records, write_records
from .resources import (
    DRUG_LEXICON,
    EFFECT_LEXICON,
    SYNONYMS,
    data_path,
    load_classifier_training,
)


@click.group()
def main():
    """Case-report mining: ingest corpora, serve the API, evaluate models."""


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--threshold", type=float, default=0.5, show_default=True,
              help="ADE classification threshold.")
@click.option("--extractor", "extractor_kind", type=click.Choice(["rule", "remote"]),
              default="rule", show_default=True)
@click.option("--remote-url", default=None, help="Endpoint for --extractor remote.")
@click.option("--remote-model", default="default", show_default=True)
@click.option("--append", "append_mode", is_flag=True,
              help="Merge into an existing record store; newest pmid wins.")
@click.option("--keyword-filter", is_flag=True,
              help="Require an adverse-event keyword (for unfiltered corpora).")
@click.option("--drug-lexicon", type=click.Path(), default=None)
@click.option("--effect-lexicon", type=click.Path(), default=None)
@click.option("--synonyms", "synonyms_path", type=click.Path(), default=None)
def ingest(corpus_path, out_path, threshold, extractor_kind, remote_url, remote_model,
           append_mode, keyword_filter, drug_lexicon, effect_lexicon, synonyms_path):
    """Run the full pipeline over a corpus file and write the record store.

    Prints the run report as one JSON object on stdout. Exits 0 on success,
    2 when the corpus is unreadable.
    """
    try:
        with open(corpus_path, encoding="utf-8") as fh:
            reports, stats = parse_corpus(fh, require_ade_keywords=keyword_filter)
    except OSError as exc:
        click.echo(f"cannot read corpus: {exc}", err=True)
        sys.exit(2)

    for lineno, reason in stats.errors:
        click.echo(f"line {lineno}: {reason}", err=True)

    classifier = train_baseline(load_classifier_training(), threshold=threshold)
    if extractor_kind == "remote":
        if not remote_url:
            click.echo("--extractor remote requires --remote-url", err=True)
            sys.exit(2)
        extractor = RemoteExtractor(endpoint=remote_url, model=remote_model)
    else:
        extractor = RuleBasedExtractor(
            Lexicons.from_files(
                drug_lexicon or data_path(DRUG_LEXICON),
                effect_lexicon or data_path(EFFECT_LEXICON),
            )
        )
    synonyms = load_synonyms(synonyms_path or data_path(SYNONYMS))

    records, report = run_pipeline(reports, classifier, extractor, synonyms)

    if append_mode and Path(out_path).exists():
        records = append_records(read_records(out_path), records)
    with open(out_path, "w", encoding="utf-8") as out:
        write_records(records, out)

    click.echo(json.dumps(report.as_flat_dict()))


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(exists=True))
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None,
              help="Corpus file backing the article views.")
@click.option("--faers-mode", type=click.Choice(["live", "fixture"]),
              default="fixture", show_default=True)
@click.option("--faers-fixtures", type=click.Path(), default=None,
              help="Directory of recorded FAERS responses (fixture mode).")
@click.option("--remote-extractor", "remote_url", default=None,
              help="Endpoint URL for remote annotation models.")
@click.option("--remote-model", "remote_models", multiple=True,
              help="Name of a remote model to expose (repeatable).")
@click.option("--ui", "ui_dist", type=click.Path(), default=None,
              help="Directory of built web UI assets to serve at /.")
@click.option("--session-ttl", type=float, default=1800.0, show_default=True)
@click.option("--upload-limit", type=int, default=1000, show_default=True,
              help="Maximum sentences per bulk upload.")
def serve(records_path, port, host, corpus_path, faers_mode, faers_fixtures,
          remote_url, remote_models, ui_dist, session_ttl, upload_limit):
    """Serve the REST API (and optionally the web UI) over HTTP."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        records_path=records_path,
        corpus_path=corpus_path,
        faers_mode=faers_mode,
        faers_fixture_dir=faers_fixtures,
        remote_extractor_url=remote_url,
        remote_models=list(remote_models),
        session_ttl=session_ttl,
        upload_line_limit=upload_limit,
    )
    app = create_app(config)
    if ui_dist:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dist, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


def _read_event_file(path: str):
    """Line-delimited sentence events: each line is an event array in the
    wire schema."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                sentences.append([])
                continue
            events, _warnings = events_from_obj(json.loads(line))
            sentences.append(events)
    return sentences


@main.command(name="eval")
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True))
@click.option("--per-role", is_flag=True, help="Include per-role scores.")
def eval_cmd(gold_path, pred_path, per_role):
    """Score a prediction file against gold (both line-delimited event
    arrays, aligned by line). Emits the report as flat JSON plus a table."""
    from .evaluation import (
        classification_metrics,
        em_f1,
        report_dict,
        report_table,
        token_f1,
    )

    gold = _read_event_file(gold_path)
    pred = _read_event_file(pred_path)
    if len(gold) != len(pred):
        click.echo(
            f"gold has {len(gold)} sentences but pred has {len(pred)}", err=True
        )
        sys.exit(2)

    # Sentence-level ADE presence doubles as the classification signal.
    classification = classification_metrics(
        [bool(events) for events in gold],
        [bool(events) for events in pred],
    )
    report = report_dict(
        em_f1(gold, pred),
        token_f1(gold, pred),
        classification=classification,
        per_role=per_role,
    )
    click.echo(json.dumps(report))
    click.echo(report_table(report), err=True)


if __name__ == "__main__":
    main()
