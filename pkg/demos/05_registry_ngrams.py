"""Registry-delete n-gram mining: repetition inside malicious runs only."""

import json

import numpy as np

from ransomkit.behavior import parse_report
from ransomkit.engineering import (
    class_ngram_report,
    cooccurrence_probability,
    extract_ngrams,
    summarize,
)

print("bigrams of a four-token sequence:")
print(" ", extract_ngrams(["Please", "take", "the", "notice"], 2))

# malicious runs delete the same three keys twice; benign deletes are ad hoc
rng = np.random.default_rng(4)
ritual = [f"hkey_local_machine\\software\\vss\\{c}" for c in "abc"]


def fake_report(keys, label):
    doc = {"behavior": {"summary": {"regkey_deleted": keys}}}
    return parse_report(json.dumps(doc), label=label)


reports = [fake_report(ritual * 2 + [f"hklm\\m{rng.integers(9)}"], "malicious")
           for _ in range(25)]
reports += [fake_report([f"hkcu\\b{rng.integers(40)}" for _ in range(5)], "benign")
            for _ in range(25)]

analysis = class_ngram_report(reports, kind="delete", n_values=(3, 4))
print("\n" + summarize(analysis))

entry = analysis.per_n[3]
print("\nmost common malicious delete 3-grams:")
for gram, count in entry["malicious"].counts.most_common(3):
    print(f"  {count:3d}x {gram}")
print("malicious repeated-within-sample:", sorted(entry["malicious"].repeated))
print("class intersection:", entry["intersection"] or "(empty)")

tokens, matrix = cooccurrence_probability(reports[:25], kind="delete")
ia = tokens.index(ritual[0])
ib = tokens.index(ritual[1])
print(f"\nP({ritual[1]!r} | {ritual[0]!r}) = {matrix[ia, ib]:.2f} "
      "(the ritual keys always travel together)")
