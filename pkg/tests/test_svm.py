import numpy as np
import pytest

from oracles import qp_dual_oracle
from ransomkit.detection import (
    kernel_matrix,
    load_svm,
    save_svm,
    svm_decision,
    svm_from_dict,
    svm_predict,
    svm_to_dict,
    train_svm,
)
from ransomkit.errors import DimensionMismatchError, NonFiniteError, SingleClassError


def two_point_model(C=1e6):
    return train_svm(np.array([[0.0], [2.0]]), np.array([-1, 1]), "linear", C=C)


def test_two_point_analytic_margin():
    model = two_point_model()
    # decision boundary at x = 1, geometric margin 2
    assert svm_decision(model, np.array([1.0])) == pytest.approx(0.0, abs=1e-6)
    assert svm_decision(model, np.array([0.0])) == pytest.approx(-1.0, abs=1e-3)
    assert svm_decision(model, np.array([2.0])) == pytest.approx(1.0, abs=1e-3)
    w = float(((model.support_alphas * model.support_labels) @ model.support_vectors)[0])
    assert 2.0 / abs(w) == pytest.approx(2.0, abs=1e-3)


def test_support_vectors_on_margin():
    model = two_point_model()
    for x in model.support_vectors:
        assert abs(svm_decision(model, x)) == pytest.approx(1.0, abs=1e-3)


def test_xor_with_rbf_reaches_full_training_accuracy():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    y = np.array([-1, -1, 1, 1])
    model = train_svm(X, y, "rbf", C=10.0, gamma=1.0)
    assert (svm_predict(model, X) == y).all()


def test_dual_constraints_hold():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(30, 4))
    y = np.where(X[:, 0] + 0.3 * rng.normal(size=30) > 0, 1, -1)
    for C in (0.1, 1.0, 10.0):
        model = train_svm(X, y, "rbf", C=C, gamma=0.5)
        assert (model.support_alphas >= -1e-12).all()
        assert (model.support_alphas <= C + 1e-9).all()
        assert abs(model.support_alphas @ model.support_labels) <= 1e-6


def test_dual_objective_matches_qp_oracle():
    rng = np.random.default_rng(17)
    for trial in range(50):
        X = rng.normal(size=(8, 2))
        y = np.array([1, 1, 1, 1, -1, -1, -1, -1])[rng.permutation(8)]
        gamma = float(rng.uniform(0.3, 2.0))
        C = float(rng.choice([1.0, 10.0]))
        model = train_svm(X, y, "rbf", C=C, gamma=gamma, tol=1e-8)
        K = kernel_matrix("rbf", X, X, gamma)
        reference = qp_dual_oracle(K, y.astype(float), C)
        assert model.dual_objective == pytest.approx(reference, rel=1e-4, abs=1e-7)


def test_primal_dual_gap_small():
    rng = np.random.default_rng(23)
    X = rng.normal(size=(40, 3))
    y = np.where(X @ np.array([1.0, -0.5, 0.2]) > 0, 1, -1)
    C = 5.0
    model = train_svm(X, y, "rbf", C=C, gamma=0.7, tol=1e-8)
    coeffs = model.support_alphas * model.support_labels
    K_sv = kernel_matrix("rbf", model.support_vectors, model.support_vectors, model.gamma)
    w_norm_sq = float(coeffs @ K_sv @ coeffs)
    margins = y * svm_decision(model, X)
    primal = 0.5 * w_norm_sq + C * np.maximum(0.0, 1.0 - margins).sum()
    assert primal >= model.dual_objective - 1e-9
    assert (primal - model.dual_objective) <= 1e-3 * max(1.0, abs(primal))


def test_decision_equals_kernel_expansion_oracle():
    rng = np.random.default_rng(29)
    X = rng.normal(size=(25, 3))
    y = np.where(X[:, 2] > 0, 1, -1)
    model = train_svm(X, y, "rbf", C=2.0, gamma=0.9)
    probes = rng.normal(size=(7, 3))
    scores = svm_decision(model, probes)
    for p, score in zip(probes, scores):
        manual = model.bias
        for sv, lab, alpha in zip(model.support_vectors, model.support_labels,
                                  model.support_alphas):
            manual += alpha * lab * np.exp(-model.gamma * ((sv - p) ** 2).sum())
        assert score == pytest.approx(manual, abs=1e-10)


def test_predict_is_sign_of_decision():
    X = np.array([[0.0], [2.0], [0.5], [1.5]])
    model = two_point_model()
    assert (svm_predict(model, X) == np.where(svm_decision(model, X) >= 0, 1, -1)).all()


def test_errors():
    with pytest.raises(SingleClassError):
        train_svm(np.zeros((3, 1)), np.ones(3))
    with pytest.raises(NonFiniteError):
        train_svm(np.array([[np.nan], [0.0]]), np.array([1, -1]))
    with pytest.raises(ValueError):
        train_svm(np.array([[0.0], [1.0]]), np.array([1, -1]), C=-1.0)
    model = two_point_model()
    with pytest.raises(DimensionMismatchError):
        svm_decision(model, np.zeros((2, 3)))


def test_serialization_round_trip(tmp_path):
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    y = np.array([-1, -1, 1, 1])
    model = train_svm(X, y, "rbf", C=10.0, gamma=1.0)
    path = tmp_path / "svm.json"
    save_svm(path, model)
    back = load_svm(path)
    assert (svm_decision(back, X) == svm_decision(model, X)).all()
    assert svm_to_dict(back) == svm_to_dict(model)
    again = svm_from_dict(svm_to_dict(model))
    assert again.gamma == model.gamma
