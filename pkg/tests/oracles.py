"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written from first principles (closed-form
characteristic polynomial, brute-force double loops, an external QP solver)
rather than reusing library code paths.
"""

from __future__ import annotations

import math

import numpy as np


def cubic_eigenvalues(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix from its characteristic polynomial.

    Trigonometric solution of the depressed cubic; returns descending order.
    """
    a11, a22, a33 = A[0, 0], A[1, 1], A[2, 2]
    a12, a13, a23 = A[0, 1], A[0, 2], A[1, 2]
    p1 = a12**2 + a13**2 + a23**2
    q = (a11 + a22 + a33) / 3.0
    if p1 == 0.0:
        return np.sort(np.array([a11, a22, a33]))[::-1]
    p2 = (a11 - q) ** 2 + (a22 - q) ** 2 + (a33 - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    B = (A - q * np.eye(3)) / p
    det_b = (
        B[0, 0] * (B[1, 1] * B[2, 2] - B[1, 2] * B[2, 1])
        - B[0, 1] * (B[1, 0] * B[2, 2] - B[1, 2] * B[2, 0])
        + B[0, 2] * (B[1, 0] * B[2, 1] - B[1, 1] * B[2, 0])
    )
    r = min(max(det_b / 2.0, -1.0), 1.0)
    phi = math.acos(r) / 3.0
    eig1 = q + 2.0 * p * math.cos(phi)
    eig3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    eig2 = 3.0 * q - eig1 - eig3
    return np.sort(np.array([eig1, eig2, eig3]))[::-1]


def brute_force_mi(x, y) -> float:
    """Plug-in mutual information by an explicit double loop, bits."""
    x = list(x)
    y = list(y)
    n = len(x)
    total = 0.0
    for xv in sorted(set(x)):
        for yv in sorted(set(y)):
            joint = sum(1 for a, b in zip(x, y) if a == xv and b == yv) / n
            if joint == 0.0:
                continue
            px = sum(1 for a in x if a == xv) / n
            py = sum(1 for b in y if b == yv) / n
            total += joint * math.log2(joint / (px * py))
    return total


def pair_count_auc(scores, labels) -> float:
    """AUC as the rank statistic P(score+ > score-) + 0.5 P(tie)."""
    pos = [s for s, lab in zip(scores, labels) if lab > 0]
    neg = [s for s, lab in zip(scores, labels) if lab <= 0]
    wins = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def qp_dual_oracle(K: np.ndarray, y: np.ndarray, C: float) -> float:
    """Optimal soft-margin dual objective via cvxopt's interior-point QP."""
    import cvxopt
    import cvxopt.solvers

    n = len(y)
    Q = np.outer(y, y) * K
    P = cvxopt.matrix(Q + 1e-10 * np.eye(n))
    q = cvxopt.matrix(-np.ones(n))
    G = cvxopt.matrix(np.vstack([-np.eye(n), np.eye(n)]))
    h = cvxopt.matrix(np.concatenate([np.zeros(n), C * np.ones(n)]))
    A = cvxopt.matrix(np.asarray(y, dtype=np.float64), (1, n))
    b = cvxopt.matrix(0.0)
    cvxopt.solvers.options["show_progress"] = False
    cvxopt.solvers.options["abstol"] = 1e-10
    cvxopt.solvers.options["reltol"] = 1e-10
    sol = cvxopt.solvers.qp(P, q, G, h, A, b)
    alpha = np.asarray(sol["x"]).ravel()
    return float(alpha.sum() - 0.5 * alpha @ Q @ alpha)


def best_gini_split(X: np.ndarray, y: np.ndarray) -> tuple[float, int, float]:
    """Exhaustive (impurity, feature, threshold) argmin over all midpoints.

    Ties resolve to the smaller feature index, then the smaller threshold,
    mirroring the documented tree-split rule.
    """
    n, d = X.shape

    def gini(labels: np.ndarray) -> float:
        if len(labels) == 0:
            return 0.0
        p = (labels > 0).mean()
        return 1.0 - p * p - (1.0 - p) * (1.0 - p)

    best: tuple[float, int, float] | None = None
    for f in range(d):
        values = np.unique(X[:, f])
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = y[X[:, f] <= threshold]
            right = y[X[:, f] > threshold]
            weighted = (len(left) * gini(left) + len(right) * gini(right)) / n
            key = (weighted, f, threshold)
            if best is None or key < best:
                best = key
    assert best is not None, "no valid split exists"
    return best
