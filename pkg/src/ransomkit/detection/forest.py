"""Random forest of unpruned Gini decision trees.

Each tree trains on a bootstrap sample of size n; at every node the best
split is searched over a random subset of floor(sqrt(d)) features (all
remaining features are tried if those are constant). Prediction is a
majority vote with ties going to the positive class: this detector would
rather flag a benign file than miss a malicious one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ransomkit.errors import DimensionMismatchError, SingleClassError


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    prediction: int = 0  # leaf label in {-1, +1}

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class RandomForestModel:
    trees: list[TreeNode]
    n_trees: int
    max_features: int
    seed: int
    dimension: int


def _gini_split(x: np.ndarray, y: np.ndarray) -> tuple[float, float] | None:
    """Best threshold of one feature column by weighted Gini impurity.

    Returns (impurity, threshold) or None when the column is constant.
    Candidate thresholds are midpoints between consecutive distinct values;
    samples with value <= threshold go left.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    distinct = np.nonzero(np.diff(xs))[0]  # split after position i
    if len(distinct) == 0:
        return None
    n = len(y)
    pos = np.cumsum(ys > 0)
    total_pos = pos[-1]
    n_left = distinct + 1
    n_right = n - n_left
    pos_left = pos[distinct]
    pos_right = total_pos - pos_left
    gini_left = 1.0 - (pos_left / n_left) ** 2 - ((n_left - pos_left) / n_left) ** 2
    gini_right = 1.0 - (pos_right / n_right) ** 2 - ((n_right - pos_right) / n_right) ** 2
    weighted = (n_left * gini_left + n_right * gini_right) / n
    best = int(weighted.argmin())  # ties: smaller threshold
    threshold = (xs[distinct[best]] + xs[distinct[best] + 1]) / 2.0
    return float(weighted[best]), threshold


def _leaf(y: np.ndarray) -> TreeNode:
    votes = int((y > 0).sum()) - int((y < 0).sum())
    return TreeNode(prediction=1 if votes >= 0 else -1)


def _grow_tree(X: np.ndarray, y: np.ndarray, max_features: int, rng: np.random.Generator) -> TreeNode:
    d = X.shape[1]
    root = TreeNode()
    stack: list[tuple[TreeNode, np.ndarray]] = [(root, np.arange(len(y)))]
    while stack:
        node, idx = stack.pop()
        ys = y[idx]
        if (ys > 0).all() or (ys < 0).all():
            node.prediction = 1 if (ys > 0).all() else -1
            continue
        candidates = rng.permutation(d)
        best: tuple[float, int, float] | None = None  # (impurity, feature, threshold)
        for rank, f in enumerate(candidates):
            if rank >= max_features and best is not None:
                break
            found = _gini_split(X[idx, f], ys)
            if found is None:
                continue
            impurity, threshold = found
            key = (impurity, f, threshold)
            if best is None or key < best:
                best = key
        if best is None:
            leaf = _leaf(ys)
            node.prediction = leaf.prediction
            continue
        _, feature, threshold = best
        node.feature = int(feature)
        node.threshold = float(threshold)
        go_left = X[idx, feature] <= threshold
        node.left = TreeNode()
        node.right = TreeNode()
        stack.append((node.left, idx[go_left]))
        stack.append((node.right, idx[~go_left]))
    return root


def train_random_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = 200,
    seed: int = 0,
    max_features: int | None = None,
) -> RandomForestModel:
    """Bootstrap-aggregated unpruned trees, deterministic given the seed.

    Per-tree randomness derives from (seed, tree index) so training is
    reproducible regardless of any parallel scheduling of the trees.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).ravel()
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise DimensionMismatchError(f"X shape {X.shape} vs {len(y)} labels")
    if X.shape[0] < 2:
        raise SingleClassError("need at least 2 samples")
    if n_trees < 1:
        raise ValueError(f"n_trees must be >= 1, got {n_trees}")
    n, d = X.shape
    if max_features is None:
        max_features = max(1, int(np.sqrt(d)))
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng([seed, t])
        boot = rng.integers(0, n, size=n)
        trees.append(_grow_tree(X[boot], y[boot], max_features, rng))
    return RandomForestModel(
        trees=trees, n_trees=n_trees, max_features=max_features, seed=seed, dimension=d
    )


def _tree_predict(node: TreeNode, x: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.prediction


def rf_score(model: RandomForestModel, X: np.ndarray) -> np.ndarray:
    """Fraction of trees voting positive, per sample."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.dimension:
        raise DimensionMismatchError(f"expected {model.dimension} columns, got {X.shape[1]}")
    votes = np.zeros(X.shape[0])
    for tree in model.trees:
        votes += [_tree_predict(tree, x) > 0 for x in X]
    scores = votes / model.n_trees
    return scores[0] if single else scores


def rf_predict(model: RandomForestModel, X: np.ndarray) -> np.ndarray:
    """Majority vote; exact ties go positive."""
    scores = rf_score(model, X)
    return np.where(np.asarray(scores) >= 0.5, 1, -1)


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"leaf": node.prediction}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(payload: dict) -> TreeNode:
    if "leaf" in payload:
        return TreeNode(prediction=int(payload["leaf"]))
    return TreeNode(
        feature=int(payload["feature"]),
        threshold=float(payload["threshold"]),
        left=_node_from_dict(payload["left"]),
        right=_node_from_dict(payload["right"]),
    )


def forest_to_dict(model: RandomForestModel) -> dict:
    return {
        "format": "ransomkit-forest-v1",
        "n_trees": model.n_trees,
        "max_features": model.max_features,
        "seed": model.seed,
        "dimension": model.dimension,
        "trees": [_node_to_dict(t) for t in model.trees],
    }


def forest_from_dict(payload: dict) -> RandomForestModel:
    if payload.get("format") != "ransomkit-forest-v1":
        raise ValueError(f"not a ransomkit forest payload: {payload.get('format')!r}")
    return RandomForestModel(
        trees=[_node_from_dict(t) for t in payload["trees"]],
        n_trees=int(payload["n_trees"]),
        max_features=int(payload["max_features"]),
        seed=int(payload["seed"]),
        dimension=int(payload["dimension"]),
    )


def save_forest(path: str | Path, model: RandomForestModel) -> None:
    Path(path).write_text(json.dumps(forest_to_dict(model), sort_keys=True), encoding="utf-8")


def load_forest(path: str | Path) -> RandomForestModel:
    return forest_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
