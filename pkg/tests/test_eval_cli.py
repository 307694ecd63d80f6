"""The eval command: file format, report shape, and exit codes."""

import json
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ademiner.cli", *args],
        capture_output=True, text=True,
    )


GOLD_LINES = [
    '[{"event_type":"ADE","arguments":{"treatment.drug":["aspirin"],"effect":["rash"],"treatment":["aspirin therapy"]}}]',
    "[]",
    '[{"event_type":"ADE","arguments":{"effect":["liver failure"],"subject.age":["6-year-old"]}}]',
]
PRED_PERFECT = GOLD_LINES
PRED_PARTIAL = [
    '[{"event_type":"ADE","arguments":{"treatment.drug":["aspirin"],"effect":["severe rash"],"treatment":["aspirin therapy"]}}]',
    '[{"event_type":"PTE","arguments":{"treatment.drug":["ibuprofen"]}}]',
    '[{"event_type":"ADE","arguments":{"effect":["acute liver failure"],"subject.age":["6-year-old"]}}]',
]


def write(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_eval_cli_perfect_prediction(tmp_path):
    gold, pred = tmp_path / "gold.jsonl", tmp_path / "pred.jsonl"
    write(gold, GOLD_LINES)
    write(pred, PRED_PERFECT)
    proc = run_cli("eval", "--gold", str(gold), "--pred", str(pred))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["overall_em_f1"] == 100.0
    assert report["overall_token_f1"] == 100.0
    assert report["main_em_f1"] == 100.0
    assert report["sub_em_f1"] == 100.0
    assert report["classification_f1"] == 100.0
    assert "overall_em_f1" in proc.stderr  # aligned table on stderr


def test_eval_cli_partial_prediction_with_roles(tmp_path):
    gold, pred = tmp_path / "gold.jsonl", tmp_path / "pred.jsonl"
    write(gold, GOLD_LINES)
    write(pred, PRED_PARTIAL)
    proc = run_cli("eval", "--gold", str(gold), "--pred", str(pred), "--per-role")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    # drug: TP=1 (aspirin), FP=1 (ibuprofen on the gold-empty line)
    assert report["role.treatment.drug.em_f1"] == 66.67
    assert report["role.effect.em_f1"] == 0.0
    assert 0.0 < report["role.effect.token_f1"] < 100.0
    assert report["overall_em_f1"] < 100.0
    # sentence-level ADE presence drives the classification section
    assert report["classification_recall"] == 100.0
    assert report["classification_precision"] < 100.0


def test_eval_cli_length_mismatch_exits_2(tmp_path):
    gold, pred = tmp_path / "gold.jsonl", tmp_path / "pred.jsonl"
    write(gold, GOLD_LINES)
    write(pred, GOLD_LINES[:2])
    proc = run_cli("eval", "--gold", str(gold), "--pred", str(pred))
    assert proc.returncode == 2
