"""Stratified splitting and k-fold cross-validated parameter search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ransomkit.errors import FoldTooSmallError, SingleClassError

Trainer = Callable[[np.ndarray, np.ndarray, dict], Callable[[np.ndarray], np.ndarray]]


def stratified_split_indices(
    y: np.ndarray, train_fraction: float = 0.8, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split; class proportions preserved within one sample."""
    y = np.asarray(y).ravel()
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClassError("both classes must be present to split")
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train: list[np.ndarray] = []
    test: list[np.ndarray] = []
    for c in classes:
        idx = np.nonzero(y == c)[0]
        perm = rng.permutation(idx)
        n_train = int(train_fraction * len(idx) + 0.5)
        train.append(perm[:n_train])
        test.append(perm[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def stratified_fold_indices(y: np.ndarray, k: int, seed: int = 0) -> list[np.ndarray]:
    """k validation folds; classes spread round-robin across folds."""
    y = np.asarray(y).ravel()
    if len(np.unique(y)) < 2:
        raise SingleClassError("both classes must be present")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > len(y):
        raise FoldTooSmallError(f"cannot make {k} folds from {len(y)} samples")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=np.int64)
    cursor = 0
    for c in np.unique(y):
        idx = np.nonzero(y == c)[0]
        for i in rng.permutation(idx):
            assignment[i] = cursor % k
            cursor += 1
    folds = [np.nonzero(assignment == f)[0] for f in range(k)]
    for f, fold in enumerate(folds):
        train_labels = np.unique(y[np.setdiff1d(np.arange(len(y)), fold)])
        if len(train_labels) < 2:
            raise FoldTooSmallError(f"training side of fold {f} lost a class")
    return folds


@dataclass
class CvCell:
    params: dict
    fold_accuracies: list[float]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


@dataclass
class CvResult:
    cells: list[CvCell]
    best_params: dict
    best_mean_accuracy: float

    def to_dict(self) -> dict:
        return {
            "grid": [
                {"params": c.params, "fold_accuracies": c.fold_accuracies,
                 "mean_accuracy": c.mean_accuracy}
                for c in self.cells
            ],
            "best_params": self.best_params,
            "best_mean_accuracy": self.best_mean_accuracy,
        }


def _tie_key(params: dict) -> tuple:
    return (params.get("C", 0.0), params.get("gamma") or 0.0, params.get("n_trees", 0))


def k_fold_cv(
    X: np.ndarray,
    y: np.ndarray,
    param_grid: list[dict],
    trainer: Trainer,
    k: int = 5,
    seed: int = 0,
) -> CvResult:
    """Pick the grid point with the best mean validation accuracy.

    Equal accuracies resolve toward the smaller C, then smaller gamma, then
    fewer trees, so a simpler model always wins a tie.
    """
    X = np.asarray(X)
    y = np.asarray(y).ravel()
    if not param_grid:
        raise ValueError("param_grid is empty")
    folds = stratified_fold_indices(y, k, seed=seed)
    everything = np.arange(len(y))
    cells: list[CvCell] = []
    for params in param_grid:
        accs: list[float] = []
        for fold in folds:
            train_idx = np.setdiff1d(everything, fold)
            predict = trainer(X[train_idx], y[train_idx], params)
            preds = np.asarray(predict(X[fold]))
            accs.append(float((preds == y[fold]).mean()))
        cells.append(CvCell(params=params, fold_accuracies=accs))
    best_acc = max(c.mean_accuracy for c in cells)
    best = min(
        (c for c in cells if c.mean_accuracy == best_acc),
        key=lambda c: _tie_key(c.params),
    )
    return CvResult(cells=cells, best_params=best.params, best_mean_accuracy=best_acc)
