"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from oracles import (
    best_gini_split,
    brute_force_mi,
    cubic_eigenvalues,
    pair_count_auc,
    qp_dual_oracle,
)
from ransomkit.cli import main
from ransomkit.detection import (
    evaluate,
    kernel_matrix,
    roc_auc,
    save_forest,
    svm_decision,
    svm_predict,
    train_random_forest,
    train_svm,
)
from ransomkit.engineering import (
    components_for_variance,
    extract_ngrams,
    fit_pca,
    mutual_information,
)
from ransomkit.engineering.mi import entropy_bits
from ransomkit.manifest import write_manifest
from ransomkit.pe import extract_static_features, parse_pe, validate_checksum
from ransomkit.synth import (
    PLANTED_REGISTRY_TOKENS,
    random_synthetic_pe,
    synthetic_behavior_corpus,
)


@contextmanager
def budget(name: str, seconds: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"{name}: FAIL")
        raise
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"{name} took {elapsed:.2f}s, budget {seconds}s"
    print(f"{name}: PASS ({elapsed:.2f}s)")


def confusion_arrays(tp, tn, fp, fn):
    y_true = np.array([1] * tp + [-1] * tn + [-1] * fp + [1] * fn)
    y_pred = np.array([1] * tp + [-1] * tn + [1] * fp + [-1] * fn)
    return y_true, y_pred


def test_criterion_01_metric_internal_consistency():
    with budget("criterion 1 (metric internal consistency)", 1.0):
        # precision 0.99, recall 0.96
        report = evaluate(*confusion_arrays(tp=792, tn=100, fp=8, fn=33))
        assert report.precision == pytest.approx(0.99, abs=1e-12)
        assert report.recall == pytest.approx(0.96, abs=1e-12)
        assert round(report.f1, 4) == 0.9748
        assert round(report.f1 * 100) == 97
        # precision 0.85, recall 0.99
        report = evaluate(*confusion_arrays(tp=1683, tn=50, fp=297, fn=17))
        assert report.precision == pytest.approx(0.85, abs=1e-12)
        assert report.recall == pytest.approx(0.99, abs=1e-12)
        assert round(report.f1, 4) == 0.9147
        assert round(report.f1 * 100) == 91


def test_criterion_02_bigram_example():
    with budget("criterion 2 (bigram example)", 1.0):
        grams = extract_ngrams(["Please", "take", "the", "notice"], 2)
        assert grams == [("Please", "take"), ("take", "the"), ("the", "notice")]


def test_criterion_03_pca_oracle_equivalence():
    with budget("criterion 3 (PCA oracle equivalence)", 10.0):
        rng = np.random.default_rng(303)
        for _ in range(100):
            n = int(rng.integers(4, 50))
            X = rng.normal(size=(n, 3)) @ rng.normal(size=(3, 3))
            model = fit_pca(X)
            centered = X - X.mean(axis=0)
            C = centered.T @ centered / n
            assert np.abs(model.eigenvalues - cubic_eigenvalues(C)).max() < 1e-8
            residual = C @ model.components - model.components * model.eigenvalues
            assert np.abs(residual).max() <= 1e-8
            assert abs(model.eigenvalues.sum() - np.trace(C)) <= 1e-8 * max(1.0, abs(np.trace(C)))


def test_criterion_04_mi_oracle_equivalence():
    with budget("criterion 4 (MI oracle equivalence)", 5.0):
        rng = np.random.default_rng(404)
        for _ in range(1000):
            n = int(rng.integers(1, 30))
            x = rng.integers(0, 2, size=n)
            y = rng.integers(0, 2, size=n)
            mine = mutual_information(x, y)
            assert abs(mine - max(brute_force_mi(x, y), 0.0)) < 1e-12
            assert mine >= 0.0
            assert mine <= min(entropy_bits(x), entropy_bits(y)) + 1e-12


def test_criterion_05_svm_correctness():
    with budget("criterion 5 (SVM correctness)", 30.0):
        model = train_svm(np.array([[0.0], [2.0]]), np.array([-1, 1]), "linear", C=1e6)
        assert svm_decision(model, np.array([1.0])) == pytest.approx(0.0, abs=1e-3)
        assert svm_decision(model, np.array([0.0])) == pytest.approx(-1.0, abs=1e-3)
        assert svm_decision(model, np.array([2.0])) == pytest.approx(1.0, abs=1e-3)

        X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
        y = np.array([-1, -1, 1, 1])
        xor = train_svm(X, y, "rbf", C=10.0, gamma=1.0)
        assert (svm_predict(xor, X) == y).all()

        rng = np.random.default_rng(505)
        for _ in range(50):
            X = rng.normal(size=(8, 2))
            y = np.array([1] * 4 + [-1] * 4)[rng.permutation(8)]
            gamma = float(rng.uniform(0.3, 2.0))
            C = float(rng.choice([1.0, 10.0]))
            model = train_svm(X, y, "rbf", C=C, gamma=gamma, tol=1e-8)
            reference = qp_dual_oracle(kernel_matrix("rbf", X, X, gamma), y.astype(float), C)
            assert model.dual_objective == pytest.approx(reference, rel=1e-4, abs=1e-7)


def test_criterion_06_forest_determinism_and_split_oracle(tmp_path):
    with budget("criterion 6 (forest determinism + split oracle)", 30.0):
        rng = np.random.default_rng(606)
        X = rng.normal(size=(50, 5))
        y = np.where(X[:, 0] + X[:, 1] > 0, 1, -1)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_forest(a, train_random_forest(X, y, n_trees=20, seed=66))
        save_forest(b, train_random_forest(X, y, n_trees=20, seed=66))
        assert a.read_bytes() == b.read_bytes()

        for trial in range(20):
            n = 60
            labels = np.where(rng.random(n) < 0.5, 1, -1)
            Xs = rng.normal(size=(n, 3))
            Xs[:, 0] += np.where(labels > 0, 2.5, 0.0) + rng.normal(scale=0.3, size=n)
            Xs[:, 1] += np.where(labels > 0, 0.0, 1.5)
            seed = 660 + trial
            model = train_random_forest(Xs, labels, n_trees=1, seed=seed, max_features=3)
            boot = np.random.default_rng([seed, 0]).integers(0, n, size=n)
            _, feature, threshold = best_gini_split(Xs[boot], labels[boot])
            assert model.trees[0].feature == feature
            assert model.trees[0].threshold == threshold


def test_criterion_07_auc_oracle():
    with budget("criterion 7 (AUC oracle)", 5.0):
        rng = np.random.default_rng(707)
        done = 0
        while done < 200:
            n = int(rng.integers(4, 40))
            labels = np.where(rng.random(n) < 0.5, 1, -1)
            if len(np.unique(labels)) < 2:
                continue
            scores = np.round(rng.normal(size=n), 1)  # rounding forces ties
            _, auc = roc_auc(scores, labels)
            assert abs(auc - pair_count_auc(scores, labels)) < 1e-12
            done += 1


def test_criterion_08_pe_round_trip(tmp_path):
    with budget("criterion 8 (PE parser round-trip)", 5.0):
        rng = np.random.default_rng(808)
        for i in range(10):
            builder = random_synthetic_pe(rng)
            path = tmp_path / f"pe_{i}.exe"
            path.write_bytes(builder.build())
            image = path.read_bytes()
            pe = parse_pe(image)
            features = extract_static_features(pe, image)
            for name, expected in builder.expected().items():
                assert features[name] == expected, name
            # validator agrees with the builder's independent checksum routine
            assert validate_checksum(pe, image).matches


def test_criterion_09_end_to_end_synthetic_pipeline(tmp_path):
    with budget("criterion 9 (end-to-end synthetic pipeline)", 120.0):
        entries = synthetic_behavior_corpus(tmp_path / "reports", n_per_class=100, seed=909)
        manifest = tmp_path / "manifest.csv"
        write_manifest(manifest, entries)
        out = tmp_path / "run"
        rc = main([
            "pipeline", "--mode", "dynamic", "--manifest", str(manifest),
            "--out", str(out), "--seed", "42", "--classifier", "svm",
            "--kernel", "rbf", "--mi-prefilter", "150", "--top-r", "40",
            "--k-max", "8", "--kind", "delete", "--n", "3", "4",
        ])
        assert rc == 0

        # (a) all 10 planted registry tokens rank in the MI top 20
        mi_rows = (out / "mi.csv").read_text().splitlines()[1:21]
        top_names = {row.split(",")[2] for row in mi_rows}
        planted = {f"registry_write:{tok}" for tok in PLANTED_REGISTRY_TOKENS}
        assert planted <= top_names, planted - top_names

        # (b) >= 95% test accuracy with RBF SVM after wrapper selection
        report = json.loads((out / "evaluation.json").read_text())
        assert report["accuracy"] >= 0.95
        bundle = json.loads((out / "model.json").read_text())
        assert bundle["classifier"] == "svm"
        assert bundle["payload"]["kernel"] == "rbf"
        assert bundle["feature_indices"]

        # (c) empty malicious/benign delete-3-gram intersection, repeated
        #     sequences present in the malicious class only
        ngram = json.loads((out / "ngram.json").read_text())["orders"]["3"]
        assert ngram["intersection_empty"] is True
        assert ngram["malicious"]["repeated_within_sample"]


def test_criterion_10_scree_rank_recovery():
    with budget("criterion 10 (scree rank recovery)", 5.0):
        rng = np.random.default_rng(1010)
        for _ in range(20):
            r = int(rng.integers(2, 9))
            d = 40
            basis = np.linalg.qr(rng.normal(size=(d, r)))[0]
            coords = rng.normal(size=(50, r)) * rng.uniform(1.0, 10.0, size=r)
            model = fit_pca(coords @ basis.T)
            assert components_for_variance(model, 0.999) == r
