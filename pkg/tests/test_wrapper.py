import numpy as np
import pytest

from ransomkit.engineering import greedy_wrapper_select, linear_svm_evaluator, rank_by_mi
from ransomkit.errors import EvaluatorFailureError, SingleClassError


def simple_evaluator(X, y):
    """Accuracy of the best single-threshold vote over the feature sum."""
    score = X.sum(axis=1)
    best = 0.0
    for threshold in np.unique(score):
        preds = np.where(score >= threshold, 1, -1)
        best = max(best, float((preds == y).mean()))
    return best


def planted_dataset(seed=0, n=40, d=6, perfect=3):
    rng = np.random.default_rng(seed)
    y = np.array([1, -1] * (n // 2))
    X = rng.integers(0, 2, size=(n, d)).astype(np.uint8)
    X[:, perfect] = (y > 0).astype(np.uint8)
    return X, y


def test_perfect_feature_selected_first_with_accuracy_one():
    X, y = planted_dataset()
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=2)
    assert trace.steps[0].feature == 3
    assert trace.steps[0].accuracy == 1.0


def test_k_max_zero_gives_empty_trace():
    X, y = planted_dataset()
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=0)
    assert trace.steps == [] and trace.selected == []


def test_trace_equals_exhaustive_per_step_argmax_oracle():
    X, y = planted_dataset(seed=5)
    candidates = list(rank_by_mi(X, y).top(6))
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=3,
                                  candidates=list(candidates))

    # independent re-run of the greedy argmax
    chosen: list[int] = []
    remaining = list(candidates)
    for _ in range(3):
        scored = [(simple_evaluator(X[:, chosen + [c]], y), -c) for c in remaining]
        best_acc, neg_c = max(scored)
        best_c = -neg_c
        # max() on (acc, -c) picks the largest c; tie rule wants the smallest
        ties = [c for (acc, nc), c in zip(scored, remaining) if acc == best_acc]
        best_c = min(ties)
        chosen.append(best_c)
        remaining.remove(best_c)
    assert trace.selected == chosen


def test_each_step_adds_exactly_one_new_index():
    X, y = planted_dataset(seed=9)
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=4)
    assert len(trace.selected) == len(set(trace.selected)) == 4
    assert [s.k for s in trace.steps] == [1, 2, 3, 4]
    for prefix_len in range(1, 5):
        assert trace.selected[:prefix_len] == [s.feature for s in trace.steps[:prefix_len]]


def test_best_so_far_accuracy_non_decreasing():
    X, y = planted_dataset(seed=13, d=8)
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=6)
    best = -1.0
    running = []
    for acc in trace.accuracies():
        best = max(best, acc)
        running.append(best)
    assert running == sorted(running)


def test_best_prefix_is_smallest_argmax():
    X, y = planted_dataset(seed=2)
    trace = greedy_wrapper_select(X, y, simple_evaluator, k_max=4)
    accs = trace.accuracies()
    k_star = trace.best_k()
    assert accs[k_star - 1] == max(accs)
    assert all(a < max(accs) for a in accs[: k_star - 1])
    assert trace.best_prefix() == trace.selected[:k_star]


def test_single_class_rejected():
    X = np.zeros((6, 3), dtype=np.uint8)
    with pytest.raises(SingleClassError):
        greedy_wrapper_select(X, np.ones(6), simple_evaluator, k_max=1)


def test_evaluator_failure_is_wrapped():
    X, y = planted_dataset()

    def broken(Xs, ys):
        raise RuntimeError("boom")

    with pytest.raises(EvaluatorFailureError):
        greedy_wrapper_select(X, y, broken, k_max=1)


def test_default_svm_evaluator_is_deterministic():
    X, y = planted_dataset(seed=21, n=60, d=5)
    evaluator = linear_svm_evaluator(seed=3)
    first = evaluator(X[:, [0, 3]].astype(float), y)
    second = evaluator(X[:, [0, 3]].astype(float), y)
    assert first == second
    trace = greedy_wrapper_select(X.astype(float), y, evaluator, k_max=2)
    assert trace.steps[0].feature == 3
    assert trace.steps[0].accuracy == 1.0
