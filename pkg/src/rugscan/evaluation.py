"""Classification metrics against labeled datasets and the holder-decline
threshold sweep.

The positive class is "rug pull" regardless of kind; kind-level agreement
is reported separately. Tokens the detector could not judge (data errors)
count against applicability but stay out of the precision/recall
denominators.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

from .chain import DetectorParams, TokenRecord
from .detector import Verdict, classify

LABEL_RUG = "rug_pull"
LABEL_LEGIT = "legitimate"

SWEEP_START = 0.50
SWEEP_STOP = 1.00
SWEEP_STEP = 0.01


class MissingPrediction(Exception):
    def __init__(self, mint: str):
        super().__init__(f"no prediction or undecided marker for labeled mint {mint}")
        self.mint = mint


class DuplicateMint(Exception):
    pass


@dataclass(frozen=True)
class LabeledEntry:
    mint: str
    label: str  # rug_pull | legitimate
    kind: str | None = None  # expected rug kind, when known


@dataclass(frozen=True)
class LabeledDataset:
    entries: tuple[LabeledEntry, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.mint in seen:
                raise DuplicateMint(f"mint labeled twice: {entry.mint}")
            seen.add(entry.mint)

    @classmethod
    def from_file(cls, path) -> "LabeledDataset":
        entries = []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#") or row[0] == "mint":
                    continue
                mint = row[0].strip()
                label = row[1].strip()
                kind = row[2].strip() if len(row) > 2 and row[2].strip() else None
                if label not in (LABEL_RUG, LABEL_LEGIT):
                    raise ValueError(f"unknown label {label!r} for {mint}")
                entries.append(LabeledEntry(mint=mint, label=label, kind=kind))
        return cls(entries=tuple(entries))

    def mints(self) -> list[str]:
        return [e.mint for e in self.entries]


@dataclass(frozen=True)
class Metrics:
    applicability: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    undecided: int
    kind_accuracy: float | None  # over true positives with a labeled kind

    def as_dict(self) -> dict:
        return {
            "applicability": self.applicability,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "undecided": self.undecided,
            "kind_accuracy": self.kind_accuracy,
        }


def metrics_from_counts(tp: int, fp: int, tn: int, fn: int, undecided: int = 0,
                        kind_accuracy: float | None = None) -> Metrics:
    decided = tp + fp + tn + fn
    total = decided + undecided
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    applicability = decided / total if total else 0.0
    return Metrics(
        applicability=applicability,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        undecided=undecided,
        kind_accuracy=kind_accuracy,
    )


def compute_metrics(
    predictions: list[Verdict], labels: LabeledDataset, undecided=()
) -> Metrics:
    """Confusion metrics of predictions against labels. Every labeled mint
    must have a verdict or appear in `undecided`."""
    by_mint = {v.mint: v for v in predictions}
    undecided_set = set(undecided)
    tp = fp = tn = fn = skipped = 0
    kind_hits = kind_total = 0
    for entry in labels.entries:
        if entry.mint in undecided_set:
            skipped += 1
            continue
        verdict = by_mint.get(entry.mint)
        if verdict is None:
            raise MissingPrediction(entry.mint)
        predicted_rug = verdict.is_rug_pull
        if entry.label == LABEL_RUG:
            if predicted_rug:
                tp += 1
                if entry.kind is not None:
                    kind_total += 1
                    kind_hits += verdict.kind == entry.kind
            else:
                fn += 1
        else:
            if predicted_rug:
                fp += 1
            else:
                tn += 1
    kind_accuracy = kind_hits / kind_total if kind_total else None
    return metrics_from_counts(tp, fp, tn, fn, undecided=skipped, kind_accuracy=kind_accuracy)


def sweep_taus(start: float = SWEEP_START, stop: float = SWEEP_STOP,
               step: float = SWEEP_STEP) -> list[float]:
    count = round((stop - start) / step) + 1
    return [round(start + i * step, 2) for i in range(count)]


def sweep_tau_down(
    records: list[TokenRecord],
    labels: LabeledDataset,
    params: DetectorParams | None = None,
    taus: list[float] | None = None,
) -> list[tuple[float, Metrics]]:
    """Re-run detection per holder-decline threshold, all other parameters
    fixed, and score each point. Each point is an independent pure
    evaluation."""
    params = params or DetectorParams()
    taus = taus if taus is not None else sweep_taus()
    rows = []
    for tau in taus:
        tuned = replace(params, tau_down=tau)
        predictions = [classify(record, tuned) for record in records]
        rows.append((tau, compute_metrics(predictions, labels)))
    return rows


def write_sweep_csv(rows: list[tuple[float, Metrics]], path) -> None:
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "precision", "recall", "f1", "applicability"])
        for tau, m in rows:
            writer.writerow(
                [f"{tau:.2f}", f"{m.precision:.6f}", f"{m.recall:.6f}",
                 f"{m.f1:.6f}", f"{m.applicability:.6f}"]
            )
