"""n-gram mining over registry-operation sequences.

A length-L sequence contributes exactly max(0, L - n + 1) n-grams, in order
of occurrence. Class tables count total occurrences across samples; the
"repeated" set holds n-grams seen at least twice within a single sample,
which is the per-file repetition signature that separates the classes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ransomkit.behavior.report import BehaviorReport, registry_sequence
from ransomkit.errors import InvalidNError, SingleClassError
from ransomkit.manifest import LABEL_BENIGN, LABEL_MALICIOUS

NGram = tuple[str, ...]


def extract_ngrams(sequence: list[str], n: int) -> list[NGram]:
    """All contiguous n-grams of a token sequence, in occurrence order."""
    if n < 1:
        raise InvalidNError(f"n must be >= 1, got {n}")
    seq = list(sequence)
    return [tuple(seq[i : i + n]) for i in range(len(seq) - n + 1)]


@dataclass
class NGramTable:
    n: int
    counts: Counter[NGram] = field(default_factory=Counter)
    repeated: set[NGram] = field(default_factory=set)
    sample_count: int = 0

    def add_sequence(self, sequence: list[str]) -> None:
        grams = extract_ngrams(sequence, self.n)
        per_sample = Counter(grams)
        self.counts.update(per_sample)
        self.repeated.update(g for g, c in per_sample.items() if c >= 2)
        self.sample_count += 1

    def total_mass(self) -> int:
        return sum(self.counts.values())


@dataclass
class ClassNgramReport:
    kind: str
    per_n: dict[int, dict]  # n -> {"malicious": NGramTable, "benign": NGramTable,
    #                               "intersection": set[NGram]}

    def intersection_empty(self, n: int) -> bool:
        return not self.per_n[n]["intersection"]


def class_ngram_report(
    reports: list[BehaviorReport], kind: str, n_values: tuple[int, ...] = (3, 4)
) -> ClassNgramReport:
    """Per-class n-gram tables of one registry op kind, plus their overlap."""
    malicious = [r for r in reports if r.label == LABEL_MALICIOUS]
    benign = [r for r in reports if r.label == LABEL_BENIGN]
    if not malicious or not benign:
        raise SingleClassError("need reports from both classes")
    per_n: dict[int, dict] = {}
    for n in n_values:
        mal_table = NGramTable(n=n)
        ben_table = NGramTable(n=n)
        for r in malicious:
            mal_table.add_sequence(registry_sequence(r, kind))
        for r in benign:
            ben_table.add_sequence(registry_sequence(r, kind))
        per_n[n] = {
            "malicious": mal_table,
            "benign": ben_table,
            "intersection": set(mal_table.counts) & set(ben_table.counts),
        }
    return ClassNgramReport(kind=kind, per_n=per_n)


def cooccurrence_probability(
    reports: list[BehaviorReport], kind: str
) -> tuple[list[str], np.ndarray]:
    """P(token b occurs in a report | token a occurs), over one op kind.

    Returns the sorted token list and the matrix M with M[a, b] = P(b | a).
    Every listed token occurs in at least one report, so every row is
    defined and the diagonal is 1.
    """
    present: list[set[str]] = [set(registry_sequence(r, kind)) for r in reports]
    tokens = sorted(set().union(*present)) if present else []
    index = {t: i for i, t in enumerate(tokens)}
    counts = np.zeros((len(tokens), len(tokens)))
    occurs = np.zeros(len(tokens))
    for toks in present:
        idx = [index[t] for t in toks]
        occurs[idx] += 1
        for a in idx:
            counts[a, idx] += 1
    matrix = counts / occurs[:, None] if len(tokens) else counts
    return tokens, matrix


def report_to_json(report: ClassNgramReport) -> dict:
    """JSON-friendly form of a ClassNgramReport, deterministically ordered."""
    def table_json(table: NGramTable) -> dict:
        return {
            "sample_count": table.sample_count,
            "total_ngrams": table.total_mass(),
            "counts": [
                {"ngram": list(g), "count": c} for g, c in sorted(table.counts.items())
            ],
            "repeated_within_sample": [list(g) for g in sorted(table.repeated)],
        }

    return {
        "kind": report.kind,
        "orders": {
            str(n): {
                "malicious": table_json(entry["malicious"]),
                "benign": table_json(entry["benign"]),
                "intersection": [list(g) for g in sorted(entry["intersection"])],
                "intersection_empty": not entry["intersection"],
            }
            for n, entry in sorted(report.per_n.items())
        },
    }


def summarize(report: ClassNgramReport) -> str:
    """Human-readable note on overlap and per-class repetition."""
    lines = [f"registry {report.kind} n-gram analysis"]
    for n, entry in sorted(report.per_n.items()):
        mal, ben = entry["malicious"], entry["benign"]
        overlap = len(entry["intersection"])
        lines.append(
            f"n={n}: malicious {len(mal.counts)} distinct / {len(mal.repeated)} repeated-in-sample, "
            f"benign {len(ben.counts)} distinct / {len(ben.repeated)} repeated-in-sample"
        )
        if overlap:
            lines.append(f"n={n}: classes share {overlap} sequences")
        else:
            lines.append(f"n={n}: no common sequence between malicious and benign files")
    return "\n".join(lines)
