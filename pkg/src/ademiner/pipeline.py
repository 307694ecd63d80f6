"""Four-stage extraction pipeline: split, classify, extract, merge.

Per article: sentences are split, classified, the ADE-positive ones run
through the configured extractor, and the resulting events are normalized
and merged by drug. The run report counts the funnel at each stage. An
extractor failure on one sentence skips that sentence and keeps going.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Protocol

from .classify import SentenceClassifier
from .corpus import CaseReport, split_sentences
from .extraction.schema import PharmaEvent
from .records import NormalizedEventRecord, event_drugs, merge_by_drug

logger = logging.getLogger(__name__)


class Extractor(Protocol):
    kind: str

    def extract(self, sentence: str) -> list[PharmaEvent]: ...


@dataclass
class RunReport:
    articles_in: int = 0
    articles_ade: int = 0
    sentences_total: int = 0
    sentences_ade: int = 0
    records_out: int = 0
    events_without_drug: int = 0
    extractor_failures: int = 0

    def as_flat_dict(self) -> dict[str, int]:
        return {
            "articles_in": self.articles_in,
            "articles_ade": self.articles_ade,
            "sentences_total": self.sentences_total,
            "sentences_ade": self.sentences_ade,
            "records_out": self.records_out,
        }


def run_pipeline(
    corpus: Iterable[CaseReport],
    classifier: SentenceClassifier,
    extractor: Extractor,
    synonyms: dict[str, str] | None = None,
) -> tuple[list[NormalizedEventRecord], RunReport]:
    report = RunReport()
    records: list[NormalizedEventRecord] = []

    for article in corpus:
        report.articles_in += 1
        sentences = split_sentences(article.abstract, article.pmid)
        report.sentences_total += len(sentences)

        positive = [s for s in sentences if classifier.classify(s.text).is_ade]
        report.sentences_ade += len(positive)
        if positive:
            report.articles_ade += 1

        events: list[tuple[int, PharmaEvent]] = []
        for sentence in positive:
            try:
                extracted = extractor.extract(sentence.text)
            except Exception as exc:
                report.extractor_failures += 1
                logger.warning(
                    "extractor failed on pmid=%s sentence=%d: %s",
                    article.pmid, sentence.index, exc,
                )
                continue
            for event in extracted:
                events.append((sentence.index, event))
                if not event_drugs(event, synonyms):
                    report.events_without_drug += 1

        article_records = merge_by_drug(article.pmid, article.pub_year, events, synonyms)
        records.extend(article_records)
        report.records_out += len(article_records)

    return records, report
