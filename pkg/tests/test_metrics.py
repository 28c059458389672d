import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import pair_count_auc
from ransomkit.detection import evaluate, roc_auc
from ransomkit.errors import LengthMismatchError, SingleClassError


def arrays_for_counts(tp, tn, fp, fn):
    y_true = np.array([1] * tp + [-1] * tn + [-1] * fp + [1] * fn)
    y_pred = np.array([1] * tp + [-1] * tn + [1] * fp + [-1] * fn)
    return y_true, y_pred


def test_all_correct():
    report = evaluate(np.array([1, -1, 1, -1]), np.array([1, -1, 1, -1]))
    assert report.accuracy == 1.0
    assert report.false_negative_rate == 0.0
    assert report.f1 == 1.0


def test_f1_consistency_p99_r96_rounds_to_97_percent():
    # TP=792, FP=8, FN=33 gives precision 0.99 and recall 0.96 exactly
    y_true, y_pred = arrays_for_counts(tp=792, tn=100, fp=8, fn=33)
    report = evaluate(y_true, y_pred)
    assert report.precision == pytest.approx(0.99, abs=1e-12)
    assert report.recall == pytest.approx(0.96, abs=1e-12)
    assert round(report.f1, 4) == 0.9748
    assert round(report.f1, 2) == 0.97


def test_f1_consistency_p85_r99_rounds_to_91_percent():
    # TP=1683, FP=297, FN=17 gives precision 0.85 and recall 0.99 exactly
    y_true, y_pred = arrays_for_counts(tp=1683, tn=50, fp=297, fn=17)
    report = evaluate(y_true, y_pred)
    assert report.precision == pytest.approx(0.85, abs=1e-12)
    assert report.recall == pytest.approx(0.99, abs=1e-12)
    assert round(report.f1, 4) == 0.9147
    assert round(report.f1, 2) == 0.91


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_metric_identities_over_random_confusions(tp, tn, fp, fn):
    if tp + tn + fp + fn == 0:
        return
    y_true, y_pred = arrays_for_counts(tp, tn, fp, fn)
    r = evaluate(y_true, y_pred)
    assert (r.tp, r.tn, r.fp, r.fn) == (tp, tn, fp, fn)
    assert r.accuracy == (tp + tn) / (tp + tn + fp + fn)
    assert r.precision == (tp / (tp + fp) if tp + fp else 0.0)
    assert r.recall == (tp / (tp + fn) if tp + fn else 0.0)
    assert r.false_negative_rate == (fn / (tp + fn) if tp + fn else 0.0)
    if r.precision + r.recall:
        assert r.f1 == pytest.approx(
            2 * r.precision * r.recall / (r.precision + r.recall)
        )
    else:
        assert r.f1 == 0.0


def test_label_swap_maps_precision_to_negative_side():
    y_true, y_pred = arrays_for_counts(tp=7, tn=11, fp=3, fn=2)
    direct = evaluate(y_true, y_pred)
    swapped = evaluate(-y_true, -y_pred)
    assert swapped.precision == direct.tn / (direct.tn + direct.fn)
    assert swapped.recall == direct.tn / (direct.tn + direct.fp)


def test_perfectly_ranked_scores_auc_one():
    scores = np.array([0.9, 0.8, 0.2, 0.1])
    labels = np.array([1, 1, -1, -1])
    points, auc = roc_auc(scores, labels)
    assert auc == 1.0
    assert points[0] == (0.0, 0.0)
    assert points[-1] == (1.0, 1.0)


def test_constant_scores_auc_half():
    scores = np.zeros(10)
    labels = np.array([1, -1] * 5)
    points, auc = roc_auc(scores, labels)
    assert auc == 0.5
    assert points == [(0.0, 0.0), (1.0, 1.0)]


def test_roc_points_monotone_and_bounded():
    rng = np.random.default_rng(4)
    scores = np.round(rng.normal(size=60), 1)  # rounding forces ties
    labels = np.where(rng.random(60) < 0.4, 1, -1)
    points, auc = roc_auc(scores, labels)
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    assert xs == sorted(xs)
    assert ys == sorted(ys)
    assert points[0] == (0.0, 0.0) and points[-1] == (1.0, 1.0)
    assert 0.0 <= auc <= 1.0


def test_auc_equals_pair_count_oracle_with_ties():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(4, 40))
        labels = np.where(rng.random(n) < 0.5, 1, -1)
        if len(np.unique(labels)) < 2:
            continue
        scores = np.round(rng.normal(size=n), 1)
        _, auc = roc_auc(scores, labels)
        assert abs(auc - pair_count_auc(scores, labels)) < 1e-12


def test_evaluate_with_scores_fills_roc():
    y = np.array([1, 1, -1, -1])
    report = evaluate(y, y, scores=np.array([0.9, 0.7, 0.6, 0.1]))
    assert report.auc is not None
    assert report.roc_points[0] == (0.0, 0.0)


def test_errors():
    with pytest.raises(LengthMismatchError):
        evaluate(np.ones(3), np.ones(2))
    with pytest.raises(LengthMismatchError):
        evaluate(np.array([]), np.array([]))
    with pytest.raises(SingleClassError):
        roc_auc(np.array([0.1, 0.2]), np.array([1, 1]))
