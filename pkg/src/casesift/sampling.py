"""Review sampling and classifier scoring.

Sample sizes use the normal-approximation size n0 = z^2 p(1-p) / e^2 shrunk
by the finite population correction n = n0 / (1 + (n0 - 1) / N), rounded up.
Samples are drawn without replacement by a partial Fisher-Yates shuffle
driven by a PCG64 generator, so a (dataset, n, seed) triple always reproduces
the same ids, independent of any host-language default RNG.

Scoring treats SJ as the positive class and reports per-class precision,
recall and F1, macro F1, support-weighted F1, accuracy and the per-predicted-
dataset correct percentages. Degenerate denominators score 0 and set a
warning flag rather than raising.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import LABEL_NON_SJ, LABEL_SJ, Dataset

Z_VALUES = {0.90: 1.644854, 0.95: 1.959964, 0.99: 2.575829}


def required_sample_size(population: int, confidence: float = 0.95,
                         margin: float = 0.05, proportion: float = 0.5) -> int:
    """FPC-corrected sample size, rounded up; never exceeds the population."""
    if population < 1:
        raise ValueError("population must be >= 1")
    if not 0 < margin < 1:
        raise ValueError("margin must be in (0, 1)")
    if not 0 < proportion < 1:
        raise ValueError("proportion must be in (0, 1)")
    z = Z_VALUES.get(round(confidence, 6))
    if z is None:
        supported = ", ".join(str(c) for c in sorted(Z_VALUES))
        raise ValueError(f"unsupported confidence {confidence}; supported: {supported}")
    n0 = z * z * proportion * (1 - proportion) / (margin * margin)
    n = math.ceil(n0 / (1 + (n0 - 1) / population))
    assert n <= population
    return n


@dataclass(frozen=True)
class SamplePlan:
    dataset_name: str
    population_size: int
    confidence: float
    margin: float
    proportion: float
    size: int
    seed: int
    case_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "dataset_name": self.dataset_name, "population_size": self.population_size,
            "confidence": self.confidence, "margin": self.margin,
            "proportion": self.proportion, "size": self.size, "seed": self.seed,
            "case_ids": list(self.case_ids),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "SamplePlan":
        return cls(dataset_name=rec["dataset_name"], population_size=rec["population_size"],
                   confidence=rec["confidence"], margin=rec["margin"],
                   proportion=rec["proportion"], size=rec["size"], seed=rec["seed"],
                   case_ids=tuple(rec["case_ids"]))


def save_plan(plan: SamplePlan, path: str | Path) -> None:
    Path(path).write_text(json.dumps(plan.to_dict(), indent=1) + "\n", encoding="utf-8")


def load_plan(path: str | Path) -> SamplePlan:
    return SamplePlan.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def sample_ids(ids: list[str], n: int, seed: int) -> list[str]:
    """First *n* entries of a PCG64-driven partial Fisher-Yates shuffle of *ids*."""
    if n > len(ids):
        raise ValueError(f"sample size {n} exceeds population {len(ids)}")
    pool = list(ids)
    rng = np.random.Generator(np.random.PCG64(seed))
    for i in range(n):
        j = i + int(rng.integers(0, len(pool) - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:n]


def draw_sample(dataset: Dataset, n: int, seed: int, confidence: float = 0.95,
                margin: float = 0.05, proportion: float = 0.5) -> SamplePlan:
    """Draw *n* distinct ids from the id-sorted dataset, reproducibly by seed."""
    chosen = sample_ids(dataset.ids(), n, seed)
    return SamplePlan(dataset_name=dataset.name, population_size=len(dataset),
                      confidence=confidence, margin=margin, proportion=proportion,
                      size=n, seed=seed, case_ids=tuple(chosen))


@dataclass(frozen=True)
class LabelRecord:
    case_id: str
    gold_label: str
    reviewer: str
    timestamp: str


class LabelStore:
    """Append-only JSONL of label records with last-write-wins materialization.

    Every submission is kept, so re-labelling a case leaves an audit trail;
    current() returns only the latest label per case.
    """

    def __init__(self, path: str | Path, allowed_ids: set[str] | None = None):
        self.path = Path(path)
        self.allowed_ids = allowed_ids
        self.records: list[LabelRecord] = []
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self.records.append(LabelRecord(
                            case_id=rec["case_id"], gold_label=rec["gold_label"],
                            reviewer=rec.get("reviewer", ""), timestamp=rec.get("timestamp", "")))

    def record_label(self, case_id: str, gold_label: str, reviewer: str = "") -> LabelRecord:
        if self.allowed_ids is not None and case_id not in self.allowed_ids:
            raise KeyError(f"case {case_id!r} is not part of the active sample")
        if gold_label not in (LABEL_SJ, LABEL_NON_SJ):
            raise ValueError(f"gold label must be {LABEL_SJ!r} or {LABEL_NON_SJ!r}")
        record = LabelRecord(case_id=case_id, gold_label=gold_label, reviewer=reviewer,
                             timestamp=datetime.now(timezone.utc).isoformat())
        self.records.append(record)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record.__dict__, ensure_ascii=False) + "\n")
        return record

    def current(self) -> dict[str, str]:
        latest: dict[str, str] = {}
        for record in self.records:
            latest[record.case_id] = record.gold_label
        return latest

    def history(self, case_id: str) -> list[LabelRecord]:
        return [r for r in self.records if r.case_id == case_id]


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def support(self, label: str) -> int:
        return self.tp + self.fn if label == LABEL_SJ else self.fp + self.tn


def confusion(predictions: Mapping[str, str], gold: Mapping[str, str]) -> ConfusionMatrix:
    """2x2 counts with SJ positive; every gold id must have a prediction."""
    missing = sorted(set(gold) - set(predictions))
    if missing:
        raise KeyError(f"no prediction for labelled case(s): {', '.join(missing)}")
    tp = fn = fp = tn = 0
    for case_id, gold_label in gold.items():
        predicted = predictions[case_id]
        if gold_label == LABEL_SJ:
            if predicted == LABEL_SJ:
                tp += 1
            else:
                fn += 1
        else:
            if predicted == LABEL_SJ:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


@dataclass(frozen=True)
class EvalReport:
    matrix: ConfusionMatrix
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    macro_f1: float
    weighted_f1: float
    accuracy: float
    correct_percentage: dict[str, float]
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "matrix": {"tp": self.matrix.tp, "fn": self.matrix.fn,
                       "fp": self.matrix.fp, "tn": self.matrix.tn},
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
            "macro_f1": self.macro_f1, "weighted_f1": self.weighted_f1,
            "accuracy": self.accuracy, "correct_percentage": self.correct_percentage,
            "warnings": list(self.warnings),
        }


def _safe_ratio(num: float, den: float, what: str, warnings: list[str]) -> float:
    if den == 0:
        warnings.append(f"{what} undefined (zero denominator); reported as 0")
        return 0.0
    return num / den


def scores(cm: ConfusionMatrix) -> EvalReport:
    """Precision/recall/F1 per class plus macro, support-weighted F1 and accuracy."""
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    warnings: list[str] = []
    precision = {
        LABEL_SJ: _safe_ratio(cm.tp, cm.tp + cm.fp, "precision(sj)", warnings),
        LABEL_NON_SJ: _safe_ratio(cm.tn, cm.tn + cm.fn, "precision(non-sj)", warnings),
    }
    recall = {
        LABEL_SJ: _safe_ratio(cm.tp, cm.tp + cm.fn, "recall(sj)", warnings),
        LABEL_NON_SJ: _safe_ratio(cm.tn, cm.tn + cm.fp, "recall(non-sj)", warnings),
    }
    f1 = {}
    for label in (LABEL_SJ, LABEL_NON_SJ):
        f1[label] = _safe_ratio(2 * precision[label] * recall[label],
                                precision[label] + recall[label], f"f1({label})", warnings)
    supports = {label: cm.support(label) for label in (LABEL_SJ, LABEL_NON_SJ)}
    weighted = sum(supports[lb] * f1[lb] for lb in f1) / cm.total
    macro = sum(f1.values()) / len(f1)
    accuracy = (cm.tp + cm.tn) / cm.total
    correct_percentage = {
        LABEL_SJ: 100.0 * _safe_ratio(cm.tp, cm.tp + cm.fp, "correct%(sj)", warnings),
        LABEL_NON_SJ: 100.0 * _safe_ratio(cm.tn, cm.tn + cm.fn, "correct%(non-sj)", warnings),
    }
    return EvalReport(matrix=cm, precision=precision, recall=recall, f1=f1,
                      macro_f1=macro, weighted_f1=weighted, accuracy=accuracy,
                      correct_percentage=correct_percentage, warnings=tuple(warnings))


def render_report(report: EvalReport) -> str:
    """Plain-text tables shaped like the manual-check and confusion-matrix reports."""
    cm = report.matrix
    reviewed_sj = cm.tp + cm.fp
    reviewed_non = cm.tn + cm.fn
    lines = [
        "Dataset            Incorrect  Correct  Total  Correct %",
        f"Predicted SJ       {cm.fp:9d}  {cm.tp:7d}  {reviewed_sj:5d}  {report.correct_percentage[LABEL_SJ]:8.1f}",
        f"Predicted non-SJ   {cm.fn:9d}  {cm.tn:7d}  {reviewed_non:5d}  {report.correct_percentage[LABEL_NON_SJ]:8.1f}",
        "",
        "                    Predicted SJ   Predicted non-SJ",
        f"Actual SJ cases     {cm.tp:12d}   {cm.fn:16d}",
        f"Actual non-SJ cases {cm.fp:12d}   {cm.tn:16d}",
        "",
        f"F1 (SJ):       {report.f1[LABEL_SJ]:.4f}",
        f"F1 (non-SJ):   {report.f1[LABEL_NON_SJ]:.4f}",
        f"Macro F1:      {report.macro_f1:.4f}",
        f"Weighted F1:   {report.weighted_f1:.4f}",
        f"Accuracy:      {report.accuracy:.4f}",
    ]
    if report.warnings:
        lines += [""] + [f"warning: {w}" for w in report.warnings]
    return "\n".join(lines)
