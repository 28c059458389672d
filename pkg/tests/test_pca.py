import numpy as np
import pytest

from oracles import cubic_eigenvalues
from ransomkit.engineering import (
    components_for_variance,
    fit_pca,
    inverse_transform,
    scree,
    transform,
)
from ransomkit.engineering.pca import PcaModel
from ransomkit.errors import DegenerateInputError, DimensionMismatchError, NonFiniteError


def test_variance_confined_to_one_axis():
    X = np.array([[0, 0], [1, 0], [2, 0], [3, 0]], dtype=float)
    model = fit_pca(X)
    assert np.allclose(model.components[:, 0], [1.0, 0.0])
    assert model.eigenvalues[1] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(model.explained_variance_ratio, [1.0, 0.0])


def test_two_point_diagonal_symmetry():
    model = fit_pca(np.array([[0, 0], [1, 1]], dtype=float))
    expected = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert np.allclose(model.components[:, 0], expected)


def test_eigenvalues_match_characteristic_polynomial_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        X = rng.normal(size=(rng.integers(4, 40), 3)) @ rng.normal(size=(3, 3))
        model = fit_pca(X)
        centered = X - X.mean(axis=0)
        C = centered.T @ centered / len(X)
        expected = cubic_eigenvalues(C)
        assert np.abs(model.eigenvalues - expected).max() < 1e-8


def test_eigen_residual_and_trace_identity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = rng.normal(size=(30, 6)) * rng.uniform(0.1, 5.0, size=6)
        model = fit_pca(X)
        centered = X - X.mean(axis=0)
        C = centered.T @ centered / len(X)
        residual = C @ model.components - model.components * model.eigenvalues
        assert np.abs(residual).max() <= 1e-8
        assert model.eigenvalues.sum() == pytest.approx(np.trace(C), rel=1e-8)
        gram = model.components.T @ model.components
        assert np.abs(gram - np.eye(6)).max() < 1e-9


def test_transform_of_mean_is_zero():
    X = np.random.default_rng(0).normal(size=(10, 4))
    model = fit_pca(X)
    assert np.allclose(transform(model, model.mean), 0.0, atol=1e-12)


def test_training_projection_variance_equals_eigenvalues():
    X = np.random.default_rng(1).normal(size=(50, 5))
    model = fit_pca(X)
    Z = transform(model, X)
    assert np.abs(Z.var(axis=0) - model.eigenvalues).max() < 1e-8


def test_rotation_constructed_data_recovered():
    # four-fold sign symmetry makes the sample covariance exactly diagonal,
    # so the rotated data's components must be the rotation itself
    rng = np.random.default_rng(2)
    a = rng.normal(0, 3.0, 50)
    b = rng.normal(0, 0.5, 50)
    axis = np.array([[sa * ai, sb * bi] for ai, bi in zip(a, b)
                     for sa in (1, -1) for sb in (1, -1)])
    theta = 0.7
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    model = fit_pca(axis @ R.T)
    Z = transform(model, axis @ R.T)
    for k in (0, 1):
        err = min(np.abs(Z[:, k] - s * axis[:, k]).max() for s in (1, -1))
        assert err < 1e-8


def test_reconstruction_with_all_components_is_exact():
    X = np.random.default_rng(3).normal(size=(20, 7))
    model = fit_pca(X)
    assert np.abs(inverse_transform(model, transform(model, X)) - X).max() < 1e-8


def test_components_for_variance_examples():
    fake = PcaModel(
        mean=np.zeros(3), components=np.eye(3),
        eigenvalues=np.array([0.6, 0.3, 0.1]),
        explained_variance_ratio=np.array([0.6, 0.3, 0.1]),
    )
    assert components_for_variance(fake, 0.9) == 2
    assert components_for_variance(fake, 1.0) == 3
    with_zero = PcaModel(
        mean=np.zeros(3), components=np.eye(3),
        eigenvalues=np.array([0.7, 0.3, 0.0]),
        explained_variance_ratio=np.array([0.7, 0.3, 0.0]),
    )
    assert components_for_variance(with_zero, 1.0) == 2  # count of nonzero eigenvalues


def test_known_rank_recovered_at_threshold():
    rng = np.random.default_rng(4)
    for _ in range(20):
        r = int(rng.integers(2, 8))
        d = 50
        basis = np.linalg.qr(rng.normal(size=(d, r)))[0]
        coords = rng.normal(size=(40, r)) * rng.uniform(1.0, 10.0, size=r)
        X = coords @ basis.T
        model = fit_pca(X)
        assert components_for_variance(model, 0.999) == r


def test_scree_monotone_terminal_one_and_prefix_sums():
    X = np.random.default_rng(5).normal(size=(30, 6))
    model = fit_pca(X)
    series = scree(model)
    assert series[0][1] == pytest.approx(model.explained_variance_ratio[0])
    assert series[-1][1] == pytest.approx(1.0, abs=1e-9)
    values = [v for _, v in series]
    assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
    prefix = 0.0
    for (idx, cum), ratio in zip(series, model.explained_variance_ratio):
        prefix += ratio
        assert cum == pytest.approx(prefix, abs=1e-12)


def test_degenerate_and_nonfinite_errors():
    with pytest.raises(DegenerateInputError):
        fit_pca(np.zeros((1, 3)))
    with pytest.raises(NonFiniteError):
        fit_pca(np.array([[0.0, np.nan], [1.0, 2.0]]))
    model = fit_pca(np.random.default_rng(6).normal(size=(5, 3)))
    with pytest.raises(DimensionMismatchError):
        transform(model, np.zeros((2, 4)))


def test_sign_convention_largest_entry_positive():
    X = np.random.default_rng(8).normal(size=(40, 5))
    model = fit_pca(X)
    for k in range(5):
        column = model.components[:, k]
        assert column[np.abs(column).argmax()] > 0
