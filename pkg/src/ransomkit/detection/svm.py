"""Soft-margin SVM trained by a working-set dual method.

The solver performs two-coordinate updates on the dual with maximal-
violating-pair selection: at each step it picks the index pair with the
largest KKT violation, solves the two-variable subproblem analytically,
clips to the box [0, C] while preserving the equality constraint, and
stops when the violation gap falls below `tol`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ransomkit.errors import DimensionMismatchError, NonFiniteError, SingleClassError

KERNELS = ("linear", "rbf")


def kernel_matrix(kernel: str, X: np.ndarray, Y: np.ndarray, gamma: float | None) -> np.ndarray:
    if kernel == "linear":
        return X @ Y.T
    if kernel == "rbf":
        sq = (X * X).sum(axis=1)[:, None] + (Y * Y).sum(axis=1)[None, :] - 2.0 * (X @ Y.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {kernel!r}")


@dataclass
class SvmModel:
    kernel: str
    C: float
    gamma: float | None
    support_vectors: np.ndarray   # (n_sv, d)
    support_labels: np.ndarray    # +-1
    support_alphas: np.ndarray    # dual coefficients, each in [0, C]
    bias: float
    dual_objective: float

    @property
    def dimension(self) -> int:
        return self.support_vectors.shape[1]


def train_svm(
    X: np.ndarray,
    y: np.ndarray,
    kernel: str = "linear",
    C: float = 1.0,
    gamma: float | None = None,
    tol: float = 1e-6,
    max_iter: int = 200_000,
) -> SvmModel:
    """Solve the soft-margin dual for labels y in {-1, +1}."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise DimensionMismatchError(f"X shape {X.shape} vs {len(y)} labels")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteError("training data contains NaN or infinity")
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if not ((y > 0).any() and (y < 0).any()):
        raise SingleClassError("need at least one sample per class")
    if kernel == "rbf":
        if gamma is None or gamma <= 0:
            raise ValueError(f"rbf kernel needs gamma > 0, got {gamma}")
    else:
        gamma = None

    n = len(y)
    K = kernel_matrix(kernel, X, X, gamma)
    Q = (y[:, None] * y[None, :]) * K
    alpha = np.zeros(n)
    gradient = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a)

    eps = 1e-12
    m = M = 0.0
    for _ in range(max_iter):
        minus_yg = -y * gradient
        up = ((y > 0) & (alpha < C - eps)) | ((y < 0) & (alpha > eps))
        low = ((y > 0) & (alpha > eps)) | ((y < 0) & (alpha < C - eps))
        if not up.any() or not low.any():
            break
        i = int(np.where(up, minus_yg, -np.inf).argmax())
        j = int(np.where(low, minus_yg, np.inf).argmin())
        m, M = minus_yg[i], minus_yg[j]
        if m - M <= tol:
            break
        quad = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
        step = (m - M) / quad
        step = min(step,
                   (C - alpha[i]) if y[i] > 0 else alpha[i],
                   alpha[j] if y[j] > 0 else (C - alpha[j]))
        d_i = y[i] * step
        d_j = -y[j] * step
        alpha[i] += d_i
        alpha[j] += d_j
        gradient += Q[:, i] * d_i + Q[:, j] * d_j

    # bias from free support vectors; fall back to the violation midpoint
    free = (alpha > eps) & (alpha < C - eps)
    minus_yg = -y * gradient
    if free.any():
        bias = float(minus_yg[free].mean())
    else:
        bias = float((m + M) / 2.0)

    objective = float(alpha.sum() - 0.5 * alpha @ (gradient + 1.0))

    sv = alpha > 1e-10 * C
    return SvmModel(
        kernel=kernel, C=float(C), gamma=gamma,
        support_vectors=X[sv].copy(),
        support_labels=y[sv].copy(),
        support_alphas=alpha[sv].copy(),
        bias=bias,
        dual_objective=objective,
    )


def svm_decision(model: SvmModel, X: np.ndarray) -> np.ndarray:
    """Signed decision scores; the prediction is their sign."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.dimension:
        raise DimensionMismatchError(f"expected {model.dimension} columns, got {X.shape[1]}")
    K = kernel_matrix(model.kernel, X, model.support_vectors, model.gamma)
    scores = K @ (model.support_alphas * model.support_labels) + model.bias
    return scores[0] if single else scores


def svm_predict(model: SvmModel, X: np.ndarray) -> np.ndarray:
    scores = svm_decision(model, X)
    return np.where(np.asarray(scores) >= 0, 1, -1)


def svm_to_dict(model: SvmModel) -> dict:
    return {
        "format": "ransomkit-svm-v1",
        "kernel": model.kernel,
        "C": model.C,
        "gamma": model.gamma,
        "bias": model.bias,
        "dual_objective": model.dual_objective,
        "support_vectors": model.support_vectors.tolist(),
        "support_labels": model.support_labels.tolist(),
        "support_alphas": model.support_alphas.tolist(),
    }


def svm_from_dict(payload: dict) -> SvmModel:
    if payload.get("format") != "ransomkit-svm-v1":
        raise ValueError(f"not a ransomkit SVM payload: {payload.get('format')!r}")
    return SvmModel(
        kernel=payload["kernel"],
        C=float(payload["C"]),
        gamma=None if payload["gamma"] is None else float(payload["gamma"]),
        support_vectors=np.array(payload["support_vectors"], dtype=np.float64).reshape(
            len(payload["support_labels"]), -1
        ),
        support_labels=np.array(payload["support_labels"], dtype=np.float64),
        support_alphas=np.array(payload["support_alphas"], dtype=np.float64),
        bias=float(payload["bias"]),
        dual_objective=float(payload["dual_objective"]),
    )


def save_svm(path: str | Path, model: SvmModel) -> None:
    Path(path).write_text(json.dumps(svm_to_dict(model), sort_keys=True), encoding="utf-8")


def load_svm(path: str | Path) -> SvmModel:
    return svm_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
