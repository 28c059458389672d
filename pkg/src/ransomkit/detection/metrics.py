"""Confusion-count metrics and ROC/AUC.

Malicious is the positive class. Accuracy, precision and recall follow the
usual confusion identities; the false negative rate FN/(TP+FN) is reported
because missing a malicious file is the costly error here.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ransomkit.errors import LengthMismatchError, SingleClassError


@dataclass
class EvaluationReport:
    tp: int
    tn: int
    fp: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    false_negative_rate: float
    roc_points: list[tuple[float, float]] = field(default_factory=list)
    auc: float | None = None


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def evaluate(
    y_true: np.ndarray, y_pred: np.ndarray, scores: np.ndarray | None = None
) -> EvaluationReport:
    """Metrics from +-1 predictions; pass scores to also get ROC and AUC."""
    y_true = np.asarray(y_true).ravel()
    y_pred = np.asarray(y_pred).ravel()
    if len(y_true) != len(y_pred) or len(y_true) == 0:
        raise LengthMismatchError(f"lengths {len(y_true)} and {len(y_pred)}")
    tp = int(((y_true > 0) & (y_pred > 0)).sum())
    tn = int(((y_true < 0) & (y_pred < 0)).sum())
    fp = int(((y_true < 0) & (y_pred > 0)).sum())
    fn = int(((y_true > 0) & (y_pred < 0)).sum())
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    report = EvaluationReport(
        tp=tp, tn=tn, fp=fp, fn=fn,
        accuracy=_ratio(tp + tn, tp + fp + fn + tn),
        precision=precision,
        recall=recall,
        f1=2 * precision * recall / (precision + recall) if precision + recall else 0.0,
        false_negative_rate=_ratio(fn, tp + fn),
    )
    if scores is not None:
        report.roc_points, report.auc = roc_auc(scores, y_true)
    return report


def roc_auc(scores: np.ndarray, y_true: np.ndarray) -> tuple[list[tuple[float, float]], float]:
    """ROC points swept over every score threshold, AUC by trapezoid rule.

    Equal scores are grouped into a single threshold step, so the AUC
    equals the rank statistic P(score+ > score-) + 0.5 P(tie).
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    y_true = np.asarray(y_true).ravel()
    if len(scores) != len(y_true) or len(scores) == 0:
        raise LengthMismatchError(f"lengths {len(scores)} and {len(y_true)}")
    n_pos = int((y_true > 0).sum())
    n_neg = len(y_true) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("ROC needs both classes present")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = (y_true[order] > 0).astype(np.int64)
    boundaries = np.nonzero(np.diff(sorted_scores))[0]  # last index of each group
    group_ends = np.concatenate([boundaries, [len(scores) - 1]])
    tp_cum = np.cumsum(sorted_pos)[group_ends]
    count_cum = group_ends + 1
    fp_cum = count_cum - tp_cum

    points = [(0.0, 0.0)]
    points += [(fp / n_neg, tp / n_pos) for fp, tp in zip(fp_cum, tp_cum)]
    auc = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        auc += (x1 - x0) * (y0 + y1) / 2.0
    return points, float(auc)


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "confusion": {"tp": report.tp, "tn": report.tn, "fp": report.fp, "fn": report.fn},
        "accuracy": report.accuracy,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "false_negative_rate": report.false_negative_rate,
        "auc": report.auc,
        "roc_points": [[x, y] for x, y in report.roc_points],
    }


def write_evaluation_json(path: str | Path, report: EvaluationReport) -> None:
    Path(path).write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_roc_csv(path: str | Path, report: EvaluationReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in report.roc_points:
            writer.writerow([repr(fpr), repr(tpr)])
