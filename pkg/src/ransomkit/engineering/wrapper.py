"""Greedy stepwise wrapper feature selection.

Candidates come from the mutual-information ranking; at each step every
remaining candidate is scored by retraining the evaluator on the current
set plus that candidate, and the accuracy argmax joins the set. The trace
is the accuracy-versus-feature-count curve; accuracy may dip when redundant
features enter, which is exactly what the curve is for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ransomkit.detection.crossval import stratified_split_indices
from ransomkit.detection.svm import svm_predict, train_svm
from ransomkit.engineering.mi import rank_by_mi
from ransomkit.errors import EvaluatorFailureError, SingleClassError

Evaluator = Callable[[np.ndarray, np.ndarray], float]


@dataclass
class SelectionStep:
    k: int
    feature: int
    accuracy: float


@dataclass
class SelectionTrace:
    steps: list[SelectionStep]
    selected: list[int]

    def best_k(self) -> int:
        """Smallest k whose accuracy equals the trace maximum."""
        if not self.steps:
            return 0
        best = max(s.accuracy for s in self.steps)
        return next(s.k for s in self.steps if s.accuracy == best)

    def best_prefix(self) -> list[int]:
        return self.selected[: self.best_k()]

    def accuracies(self) -> list[float]:
        return [s.accuracy for s in self.steps]


def linear_svm_evaluator(seed: int = 0, C: float = 1.0, train_fraction: float = 0.8) -> Evaluator:
    """Default wrapper evaluator: linear SVM accuracy on a fixed 80/20 split."""

    def score(X: np.ndarray, y: np.ndarray) -> float:
        train_idx, val_idx = stratified_split_indices(y, train_fraction, seed=seed)
        model = train_svm(X[train_idx], y[train_idx], kernel="linear", C=C)
        preds = svm_predict(model, X[val_idx])
        return float((preds == y[val_idx]).mean())

    return score


def greedy_wrapper_select(
    X: np.ndarray,
    y: np.ndarray,
    evaluator: Evaluator,
    k_max: int,
    candidates: list[int] | np.ndarray | None = None,
    top_r: int = 500,
) -> SelectionTrace:
    """Run min(k_max, #candidates) greedy steps and record the full trace.

    Accuracy ties at a step resolve toward the smaller feature index, so
    the result does not depend on candidate evaluation order.
    """
    X = np.asarray(X)
    y = np.asarray(y).ravel()
    if len(np.unique(y)) < 2:
        raise SingleClassError("labels contain a single class")
    if k_max > X.shape[1]:
        raise ValueError(f"k_max {k_max} exceeds dimension {X.shape[1]}")
    if candidates is None:
        candidates = rank_by_mi(X, y).top(top_r)
    remaining = [int(c) for c in candidates]

    steps: list[SelectionStep] = []
    selected: list[int] = []
    for k in range(1, min(k_max, len(remaining)) + 1):
        best_feature = -1
        best_accuracy = -1.0
        for candidate in remaining:
            columns = selected + [candidate]
            try:
                accuracy = float(evaluator(X[:, columns], y))
            except Exception as exc:
                raise EvaluatorFailureError(
                    f"evaluator failed on features {columns}: {exc}"
                ) from exc
            if accuracy > best_accuracy or (
                accuracy == best_accuracy and candidate < best_feature
            ):
                best_accuracy = accuracy
                best_feature = candidate
        selected.append(best_feature)
        remaining.remove(best_feature)
        steps.append(SelectionStep(k=k, feature=best_feature, accuracy=best_accuracy))
    return SelectionTrace(steps=steps, selected=selected)
