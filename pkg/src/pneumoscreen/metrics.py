"""Binary classification metrics: accuracy, macro-F1, AUROC, binned ECE.

Inputs are (true_label, prob_positive) records with an optional domain tag;
per-domain sub-reports follow the same column order as the aggregate report.
Zero-denominator conventions: precision/recall/F1 fall back to 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from pneumoscreen.errors import EmptyInput, SingleClass

DOMAIN_NAMES = ("Clean", "Blur", "Noise", "Contrast")


@dataclass(frozen=True)
class PredictionRecord:
    true_label: int
    prob_positive: float
    domain: Optional[int] = None

    def __post_init__(self) -> None:
        if self.true_label not in (0, 1):
            raise ValueError(f"true_label must be 0 or 1, got {self.true_label}")
        if not (0.0 <= self.prob_positive <= 1.0):
            raise ValueError(f"prob_positive {self.prob_positive} outside [0, 1]")


def _check_nonempty(records: Sequence[PredictionRecord]) -> None:
    if not records:
        raise EmptyInput("no prediction records")


def _arrays(records: Sequence[PredictionRecord]):
    y = np.array([r.true_label for r in records], dtype=int)
    p = np.array([r.prob_positive for r in records], dtype=float)
    return y, p


def accuracy(records: Sequence[PredictionRecord], threshold: float = 0.5) -> float:
    """Fraction correct with predicted label 1 iff prob >= threshold."""
    _check_nonempty(records)
    y, p = _arrays(records)
    pred = (p >= threshold).astype(int)
    return float(np.mean(pred == y))


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return precision, recall, f1


def per_class_stats(
    records: Sequence[PredictionRecord], threshold: float = 0.5
) -> dict[int, dict[str, float]]:
    """Precision/recall/F1/support for each class of the binary task."""
    _check_nonempty(records)
    y, p = _arrays(records)
    pred = (p >= threshold).astype(int)
    out = {}
    for cls in (0, 1):
        tp = int(np.sum((pred == cls) & (y == cls)))
        fp = int(np.sum((pred == cls) & (y != cls)))
        fn = int(np.sum((pred != cls) & (y == cls)))
        precision, recall, f1 = _prf(tp, fp, fn)
        out[cls] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": int(np.sum(y == cls)),
        }
    return out


def macro_f1(records: Sequence[PredictionRecord], threshold: float = 0.5) -> float:
    """Unweighted mean of per-class F1; absent classes score 0 by convention."""
    stats = per_class_stats(records, threshold)
    return float(np.mean([stats[c]["f1"] for c in (0, 1)]))


def auroc(records: Sequence[PredictionRecord]) -> float:
    """Mann-Whitney AUROC via rank-sum; ties count half."""
    _check_nonempty(records)
    y, p = _arrays(records)
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUROC requires both classes present")
    ranks = rankdata(p)
    rank_sum_pos = float(np.sum(ranks[y == 1]))
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def ece(
    records: Sequence[PredictionRecord], bins: int = 15, threshold: float = 0.5
) -> float:
    """Expected calibration error over equal-width confidence bins on [0,1].

    Confidence is the top-class probability max(p, 1-p); bins are
    right-open except the last, which includes 1.0; empty bins contribute 0.
    """
    _check_nonempty(records)
    y, p = _arrays(records)
    conf = np.maximum(p, 1.0 - p)
    pred = (p >= threshold).astype(int)
    correct = (pred == y).astype(float)
    idx = np.minimum((conf * bins).astype(int), bins - 1)
    total = len(records)
    value = 0.0
    for b in range(bins):
        mask = idx == b
        n_b = int(np.sum(mask))
        if n_b == 0:
            continue
        gap = abs(float(np.mean(correct[mask])) - float(np.mean(conf[mask])))
        value += (n_b / total) * gap
    return value


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    macro_f1: float
    auroc: Optional[float]
    ece: float
    per_class: dict[int, dict[str, float]]
    per_domain: Optional[dict[int, "MetricsReport"]] = None

    def to_dict(self) -> dict:
        d = {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "auroc": self.auroc,
            "ece": self.ece,
            "per_class": {str(k): v for k, v in self.per_class.items()},
        }
        if self.per_domain is not None:
            d["per_domain"] = {
                str(k): v.to_dict() for k, v in self.per_domain.items()
            }
        return d


def report(
    records: Sequence[PredictionRecord], bins: int = 15, threshold: float = 0.5
) -> MetricsReport:
    """Full report, with per-domain sub-reports when domain labels present."""
    _check_nonempty(records)
    try:
        auc = auroc(records)
    except SingleClass:
        auc = None
    per_domain = None
    domains = sorted({r.domain for r in records if r.domain is not None})
    if domains:
        per_domain = {}
        for d in domains:
            # strip the domain tag so sub-reports do not recurse
            subset = [
                PredictionRecord(r.true_label, r.prob_positive)
                for r in records
                if r.domain == d
            ]
            per_domain[d] = report(subset, bins=bins, threshold=threshold)
    return MetricsReport(
        accuracy=accuracy(records, threshold),
        macro_f1=macro_f1(records, threshold),
        auroc=auc,
        ece=ece(records, bins, threshold),
        per_class=per_class_stats(records, threshold),
        per_domain=per_domain,
    )


def _fmt(x: Optional[float]) -> str:
    return "   n/a" if x is None else f"{x:.4f}"


def render_text(rep: MetricsReport) -> str:
    """Aligned text rendering: classification report plus per-domain rows."""
    out = io.StringIO()
    out.write(f"{'':>14} {'Precision':>10} {'Recall':>8} {'F1-score':>9} {'Support':>8}\n")
    for cls, name in ((0, "normal (0)"), (1, "abnormal (1)")):
        s = rep.per_class[cls]
        out.write(
            f"{name:>14} {s['precision']:>10.2f} {s['recall']:>8.2f} "
            f"{s['f1']:>9.2f} {s['support']:>8d}\n"
        )
    out.write(f"\nAccuracy : {rep.accuracy:.4f}\n")
    out.write(f"Macro-F1 : {rep.macro_f1:.4f}\n")
    out.write(f"AUROC    : {_fmt(rep.auroc)}\n")
    out.write(f"ECE      : {rep.ece:.4f}\n")
    if rep.per_domain:
        out.write(
            f"\n{'d':>2} {'Domain':>9} {'Accuracy':>9} {'Macro-F1':>9} "
            f"{'AUROC':>7} {'ECE':>7}\n"
        )
        for d, sub in sorted(rep.per_domain.items()):
            name = DOMAIN_NAMES[d] if 0 <= d < len(DOMAIN_NAMES) else str(d)
            auc = "   n/a" if sub.auroc is None else f"{sub.auroc:.4f}"
            out.write(
                f"{d:>2} {name:>9} {sub.accuracy:>9.4f} {sub.macro_f1:>9.4f} "
                f"{auc:>7} {sub.ece:>7.4f}\n"
            )
    return out.getvalue()


def read_records_csv(text: str) -> list[PredictionRecord]:
    """Parse `true_label,prob_positive[,domain]` CSV (header optional)."""
    records = []
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        if not row:
            continue
        if row[0].strip().lower() in ("true_label", "label"):
            continue
        domain = int(row[2]) if len(row) > 2 and row[2].strip() != "" else None
        records.append(
            PredictionRecord(int(row[0]), float(row[1]), domain)
        )
    return records


def to_json(rep: MetricsReport) -> str:
    return json.dumps(rep.to_dict(), indent=2)
