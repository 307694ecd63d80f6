"""Locations of the bundled data files."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(str(files("ademiner").joinpath("data", name)))


DRUG_LEXICON = "drug_lexicon.txt"
EFFECT_LEXICON = "effect_lexicon.txt"
SYNONYMS = "synonyms.tsv"
CLASSIFIER_TRAIN = "classifier_train.tsv"
DRUG_INFO = "druginfo.json"
PRELOADED = "preloaded.json"


def load_classifier_training(path: str | Path | None = None) -> list[tuple[str, bool]]:
    """Read the ``label<TAB>sentence`` training fixture."""
    p = Path(path) if path else data_path(CLASSIFIER_TRAIN)
    examples = []
    for raw in p.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, text = line.split("\t", 1)
        examples.append((text, label.strip() == "1"))
    return examples
