"""ADE sentence classification.

The pipeline filters abstract sentences down to the ones describing adverse
events before running extraction. Any classifier with a ``classify(text) ->
AdeLabel`` method plugs in; the bundled baseline is a multinomial naive
Bayes over lowercased alphanumeric unigrams with add-one smoothing, which is
deterministic and fast enough to retrain at import time from a small labeled
fixture. A neural classifier can be swapped in behind the same protocol.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Protocol

_TOKEN = re.compile(r"[a-z0-9]+")

UNKNOWN_TOKEN = "\x00unk"


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class AdeLabel:
    is_ade: bool
    score: float  # posterior probability of the positive class


class SentenceClassifier(Protocol):
    def classify(self, sentence: str) -> AdeLabel: ...


class TrainingError(ValueError):
    pass


class BaselineClassifier:
    """Multinomial naive Bayes. The likelihood table covers every training
    token plus an unknown-token bucket so each class distribution sums to
    one; out-of-vocabulary tokens contribute no evidence at scoring time, so
    an all-unknown sentence falls back to the class priors."""

    def __init__(
        self,
        log_prior: dict[bool, float],
        token_log_likelihood: dict[bool, dict[str, float]],
        threshold: float = 0.5,
    ):
        self.log_prior = log_prior
        self.token_log_likelihood = token_log_likelihood
        self.threshold = threshold

    def classify(self, sentence: str) -> AdeLabel:
        log_joint = {c: self.log_prior[c] for c in (True, False)}
        for token in tokenize(sentence):
            if token in self.token_log_likelihood[True]:
                for c in (True, False):
                    log_joint[c] += self.token_log_likelihood[c][token]
        # Normalize the two joints into a posterior for the positive class.
        m = max(log_joint.values())
        z = sum(math.exp(v - m) for v in log_joint.values())
        score = math.exp(log_joint[True] - m) / z
        return AdeLabel(is_ade=score >= self.threshold, score=score)


def train_baseline(
    labeled: Iterable[tuple[str, bool]], threshold: float = 0.5
) -> BaselineClassifier:
    """Fit naive-Bayes parameters; requires at least one example per class."""
    docs = list(labeled)
    counts: dict[bool, dict[str, int]] = {True: {}, False: {}}
    n_docs = {True: 0, False: 0}
    for text, label in docs:
        n_docs[label] += 1
        bucket = counts[label]
        for token in tokenize(text):
            bucket[token] = bucket.get(token, 0) + 1
    for label, name in ((True, "positive"), (False, "negative")):
        if n_docs[label] == 0:
            raise TrainingError(f"no {name} examples in the training data")

    vocabulary = sorted(set(counts[True]) | set(counts[False])) + [UNKNOWN_TOKEN]
    total = n_docs[True] + n_docs[False]
    log_prior = {c: math.log(n_docs[c] / total) for c in (True, False)}
    token_log_likelihood: dict[bool, dict[str, float]] = {True: {}, False: {}}
    for c in (True, False):
        denom = sum(counts[c].values()) + len(vocabulary)
        for token in vocabulary:
            token_log_likelihood[c][token] = math.log(
                (counts[c].get(token, 0) + 1) / denom
            )
    return BaselineClassifier(log_prior, token_log_likelihood, threshold)
