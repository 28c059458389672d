import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ransomkit.behavior import parse_report
from ransomkit.engineering import (
    class_ngram_report,
    cooccurrence_probability,
    extract_ngrams,
    report_to_json,
    summarize,
)
from ransomkit.errors import InvalidNError, SingleClassError


def report_with_deletes(keys, label):
    doc = {"behavior": {"summary": {"regkey_deleted": keys}}}
    return parse_report(json.dumps(doc), label=label)


def test_bigrams_of_four_word_sentence():
    grams = extract_ngrams(["Please", "take", "the", "notice"], 2)
    assert grams == [("Please", "take"), ("take", "the"), ("the", "notice")]


def test_n_larger_than_sequence_is_empty():
    assert extract_ngrams(["a", "b"], 5) == []


def test_invalid_n():
    with pytest.raises(InvalidNError):
        extract_ngrams(["a"], 0)


def test_sliding_window_oracle_on_random_sequence():
    rng = np.random.default_rng(0)
    seq = [f"t{v}" for v in rng.integers(0, 5, size=10)]
    grams = extract_ngrams(seq, 3)
    assert len(grams) == 8
    for i, gram in enumerate(grams):
        assert gram == tuple(seq[i : i + 3])


@given(st.lists(st.sampled_from("abcd"), max_size=30), st.integers(1, 6))
def test_count_identity(seq, n):
    assert len(extract_ngrams(seq, n)) == max(0, len(seq) - n + 1)


def test_planted_structure_mirrors_class_difference():
    mal = [report_with_deletes(["a", "b", "c", "a", "b", "c"], "malicious") for _ in range(4)]
    ben = [
        report_with_deletes([f"x{i}", f"y{i}", f"z{i}", f"w{i}"], "benign")
        for i in range(4)
    ]
    rep = class_ngram_report(mal + ben, "delete", (3,))
    entry = rep.per_n[3]
    assert entry["malicious"].repeated == {("a", "b", "c")}
    assert entry["benign"].repeated == set()
    assert entry["intersection"] == set()
    assert rep.intersection_empty(3)
    assert "no common sequence" in summarize(rep)


def test_identical_corpora_intersect_fully():
    keys = ["k1", "k2", "k3", "k4"]
    mal = [report_with_deletes(keys, "malicious")]
    ben = [report_with_deletes(keys, "benign")]
    rep = class_ngram_report(mal + ben, "delete", (3,))
    entry = rep.per_n[3]
    assert entry["intersection"] == set(entry["malicious"].counts)
    assert not rep.intersection_empty(3)


def test_tables_match_naive_full_scan_oracle():
    rng = np.random.default_rng(5)
    reports = []
    for i in range(10):
        keys = [f"k{v}" for v in rng.integers(0, 6, size=rng.integers(3, 12))]
        reports.append(report_with_deletes(keys, "malicious" if i % 2 else "benign"))
    rep = class_ngram_report(reports, "delete", (3, 4))
    for n in (3, 4):
        for label, table in (("malicious", rep.per_n[n]["malicious"]),
                             ("benign", rep.per_n[n]["benign"])):
            naive = Counter()
            naive_repeated = set()
            expected_mass = 0
            for r in reports:
                if r.label != label:
                    continue
                seq = r.registry_ops["delete"]
                expected_mass += max(0, len(seq) - n + 1)
                per = Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))
                naive.update(per)
                naive_repeated |= {g for g, c in per.items() if c >= 2}
            assert table.counts == naive
            assert table.repeated == naive_repeated
            assert table.total_mass() == expected_mass


def test_single_class_rejected():
    with pytest.raises(SingleClassError):
        class_ngram_report([report_with_deletes(["a"], "malicious")], "delete")


def test_report_json_shape():
    mal = [report_with_deletes(["a", "b", "c", "a", "b", "c"], "malicious")]
    ben = [report_with_deletes(["p", "q", "r"], "benign")]
    payload = report_to_json(class_ngram_report(mal + ben, "delete", (3,)))
    entry = payload["orders"]["3"]
    assert entry["intersection_empty"] is True
    assert entry["malicious"]["repeated_within_sample"] == [["a", "b", "c"]]
    json.dumps(payload)  # must be serializable


def test_cooccurrence_trivial_cases():
    always = [report_with_deletes(["a", "b"], "malicious") for _ in range(3)]
    tokens, matrix = cooccurrence_probability(always, "delete")
    ia, ib = tokens.index("a"), tokens.index("b")
    assert matrix[ia, ib] == 1.0 and matrix[ib, ia] == 1.0

    disjoint = [report_with_deletes(["a"], "m"), report_with_deletes(["b"], "m")]
    tokens, matrix = cooccurrence_probability(disjoint, "delete")
    ia, ib = tokens.index("a"), tokens.index("b")
    assert matrix[ia, ib] == 0.0 and matrix[ib, ia] == 0.0


def test_cooccurrence_matches_count_ratio_oracle():
    rng = np.random.default_rng(8)
    universe = [f"k{i}" for i in range(6)]
    reports = []
    for _ in range(8):
        mask = rng.random(6) < 0.5
        keys = [t for t, keep in zip(universe, mask) if keep]
        reports.append(report_with_deletes(keys or ["k0"], "m"))
    tokens, matrix = cooccurrence_probability(reports, "delete")
    sets = [set(r.registry_ops["delete"]) for r in reports]
    for i, a in enumerate(tokens):
        with_a = sum(1 for s in sets if a in s)
        assert with_a >= 1
        assert matrix[i, i] == 1.0
        for j, b in enumerate(tokens):
            both = sum(1 for s in sets if a in s and b in s)
            assert matrix[i, j] == pytest.approx(both / with_a)
            assert 0.0 <= matrix[i, j] <= 1.0
