"""Principal component analysis by explicit covariance eigendecomposition.

The covariance uses the 1/N normalization (matching the projected-variance
identity Var(z) = w' C w that defines the components), and the
eigenproblem C w = a w is solved with a cyclic Jacobi sweep, which is
accurate and perfectly adequate at the dimensionalities this pipeline sees
after candidate pre-filtering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ransomkit.errors import DegenerateInputError, DimensionMismatchError, NonFiniteError


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.

    Sweeps until every off-diagonal magnitude drops below `tol` scaled by
    the Frobenius norm. Returns (eigenvalues, eigenvectors) unsorted, with
    eigenvectors in columns.
    """
    A = np.array(matrix, dtype=np.float64)
    d = A.shape[0]
    V = np.eye(d)
    if d == 1:
        return np.array([A[0, 0]]), V
    threshold = tol * max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        off = np.abs(A - np.diag(np.diag(A))).max()
        if off < threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) < threshold / d:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A).copy(), V


@dataclass
class PcaModel:
    mean: np.ndarray                      # feature means, length d
    components: np.ndarray                # d x d, orthonormal columns
    eigenvalues: np.ndarray               # descending
    explained_variance_ratio: np.ndarray  # sums to 1 for non-degenerate data

    @property
    def dimension(self) -> int:
        return len(self.mean)


def fit_pca(X: np.ndarray) -> PcaModel:
    """Fit PCA on an (n_samples, n_features) matrix.

    Columns of the component matrix are covariance eigenvectors sorted by
    descending eigenvalue; each column is oriented so its largest-magnitude
    entry is positive.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
        raise DegenerateInputError(f"need at least 2 samples and 1 feature, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise NonFiniteError("input contains NaN or infinity")

    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / X.shape[0]

    eigenvalues, vectors = jacobi_eigh(cov)
    eigenvalues = np.where(np.abs(eigenvalues) < 1e-15 * max(1.0, np.abs(eigenvalues).max()),
                           0.0, eigenvalues)
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]

    # deterministic sign: largest-magnitude entry of each column is positive
    anchor = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[anchor, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors = vectors * signs

    total = eigenvalues.sum()
    ratio = eigenvalues / total if total > 0 else np.zeros_like(eigenvalues)
    return PcaModel(
        mean=mean, components=vectors, eigenvalues=eigenvalues,
        explained_variance_ratio=ratio,
    )


def transform(model: PcaModel, X: np.ndarray) -> np.ndarray:
    """Project rows of X into component coordinates z = W'(x - mean)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.dimension:
        raise DimensionMismatchError(f"expected {model.dimension} columns, got {X.shape[1]}")
    return (X - model.mean) @ model.components


def inverse_transform(model: PcaModel, Z: np.ndarray) -> np.ndarray:
    return np.asarray(Z) @ model.components.T + model.mean


def components_for_variance(model: PcaModel, threshold: float) -> int:
    """Smallest k whose cumulative explained variance reaches `threshold`."""
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    cumulative = np.cumsum(model.explained_variance_ratio)
    return int(np.searchsorted(cumulative, threshold - 1e-12)) + 1


def scree(model: PcaModel) -> list[tuple[int, float]]:
    """(component index, cumulative explained variance) series, 1-based."""
    cumulative = np.cumsum(model.explained_variance_ratio)
    return [(i + 1, float(c)) for i, c in enumerate(cumulative)]
