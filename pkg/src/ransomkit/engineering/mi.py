"""Discrete mutual information and per-feature relevance ranking.

The estimator is the plug-in one: empirical cell probabilities, summed over
observed cells only, log base 2 so scores are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ransomkit.errors import LengthMismatchError, SingleClassError


def mutual_information(x: np.ndarray, y: np.ndarray) -> float:
    """I(X;Y) in bits between two equal-length discrete sequences."""
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if len(x) != len(y) or len(x) == 0:
        raise LengthMismatchError(f"lengths {len(x)} and {len(y)}")
    n = len(x)
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    table = np.zeros((xi.max() + 1, yi.max() + 1))
    np.add.at(table, (xi, yi), 1.0)
    pxy = table / n
    marginal = pxy.sum(axis=1, keepdims=True) * pxy.sum(axis=0, keepdims=True)
    mask = pxy > 0
    value = float((pxy[mask] * np.log2(pxy[mask] / marginal[mask])).sum())
    return max(value, 0.0)


def entropy_bits(x: np.ndarray) -> float:
    """Shannon entropy of a discrete sequence, in bits."""
    _, counts = np.unique(np.asarray(x).ravel(), return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


@dataclass
class MiScoreTable:
    scores: np.ndarray  # MI in bits, indexed by feature
    order: np.ndarray   # feature indices, descending score, ties by index

    def top(self, k: int) -> np.ndarray:
        return self.order[:k]


def _binary_feature_mi(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized MI of every binary column of X against binary labels y."""
    n, _ = X.shape
    classes = np.unique(y)
    pos = y == classes[1]
    n_pos = int(pos.sum())
    n_neg = n - n_pos
    on_pos = X[pos].sum(axis=0).astype(np.float64)
    on_neg = X[~pos].sum(axis=0).astype(np.float64)
    cells = np.stack(
        [on_pos, on_neg, n_pos - on_pos, n_neg - on_neg], axis=1
    ) / n  # columns: (x=1,y=+), (x=1,y=-), (x=0,y=+), (x=0,y=-)
    px1 = cells[:, 0] + cells[:, 1]
    px0 = cells[:, 2] + cells[:, 3]
    py1 = n_pos / n
    py0 = n_neg / n
    marginals = np.stack([px1 * py1, px1 * py0, px0 * py1, px0 * py0], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(cells > 0, cells * np.log2(cells / marginals), 0.0)
    return np.maximum(terms.sum(axis=1), 0.0)


def rank_by_mi(X: np.ndarray, y: np.ndarray) -> MiScoreTable:
    """Score every column of X against the labels and sort descending.

    X is an (n_samples, n_features) discrete matrix; binary matrices take a
    vectorized path, anything else falls back to per-column estimation.
    Ties break toward the smaller feature index.
    """
    X = np.asarray(X)
    y = np.asarray(y).ravel()
    if X.ndim != 2 or X.shape[0] != len(y):
        raise LengthMismatchError(f"X shape {X.shape} vs {len(y)} labels")
    if X.shape[0] < 2:
        raise SingleClassError("need at least 2 samples")
    if len(np.unique(y)) < 2:
        raise SingleClassError("labels contain a single class")

    values = np.unique(X)
    if len(values) <= 2 and np.isin(values, (0, 1)).all():
        scores = _binary_feature_mi(X.astype(np.uint8), y)
    else:
        scores = np.array([mutual_information(X[:, j], y) for j in range(X.shape[1])])
    order = np.lexsort((np.arange(len(scores)), -scores))
    return MiScoreTable(scores=scores, order=order)


def binarize_at_median(X: np.ndarray) -> np.ndarray:
    """Per-column median split; used to discretize real features for MI."""
    X = np.asarray(X, dtype=np.float64)
    return (X > np.median(X, axis=0)).astype(np.uint8)
