"""Binary presence encoding of behavior reports over a learned vocabulary.

A vocabulary entry is a (category, token) pair; the op kind is part of the
category so the same registry key deleted and written stays two distinct
features. Encoding is binary presence: index i is active iff entry i's
token occurs at least once in the report under that category.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ransomkit.errors import EmptyCorpusError, RansomkitError
from ransomkit.manifest import LedgerEntry, ManifestEntry, labels_to_pm1
from ransomkit.behavior.report import BehaviorReport, parse_report_file

CATEGORY_ORDER = (
    "api",
    "registry_create", "registry_delete", "registry_read", "registry_write",
    "file_create", "file_delete", "file_read", "file_write",
    "directory",
    "extension",
    "drop",
    "domain",
    "dll",
    "string",
)

_CATEGORY_RANK = {c: i for i, c in enumerate(CATEGORY_ORDER)}

# aggregation of op-kind categories back to summary rows
SUMMARY_ROWS = (
    ("API calls", ("api",)),
    ("Registry operations", ("registry_create", "registry_delete", "registry_read", "registry_write")),
    ("File operations", ("file_create", "file_delete", "file_read", "file_write")),
    ("Directory created", ("directory",)),
    ("Extensions", ("extension",)),
    ("Drop", ("drop",)),
    ("Network domains", ("domain",)),
    ("DLL's", ("dll",)),
    ("Strings", ("string",)),
)


def report_token_pairs(report: BehaviorReport) -> list[tuple[str, str]]:
    """All (category, token) occurrences of a report, multiplicity kept."""
    pairs: list[tuple[str, str]] = [("api", t) for t in report.api_calls]
    for kind in ("create", "delete", "read", "write"):
        pairs += [(f"registry_{kind}", t) for t in report.registry_ops[kind]]
    for kind in ("create", "delete", "read", "write"):
        pairs += [(f"file_{kind}", t) for t in report.file_ops[kind]]
    pairs += [("directory", t) for t in report.dirs_created]
    pairs += [("extension", t) for t in report.drop_extensions]
    pairs += [("drop", t) for t in report.drops]
    pairs += [("domain", t) for t in report.net_domains]
    pairs += [("dll", t) for t in report.dlls]
    pairs += [("string", t) for t in report.strings]
    return pairs


@dataclass
class TokenVocabulary:
    entries: list[tuple[str, str]]  # ordered (category, token) pairs
    index: dict[tuple[str, str], int] = field(init=False)

    def __post_init__(self) -> None:
        self.index = {pair: i for i, pair in enumerate(self.entries)}
        if len(self.index) != len(self.entries):
            raise ValueError("duplicate (category, token) pair in vocabulary")

    def __len__(self) -> int:
        return len(self.entries)

    def category_counts(self) -> dict[str, int]:
        counts = Counter(cat for cat, _ in self.entries)
        return {cat: counts.get(cat, 0) for cat in CATEGORY_ORDER}

    def summary_counts(self) -> dict[str, int]:
        """Vocabulary size per summary row (op kinds aggregated)."""
        per_cat = self.category_counts()
        return {row: sum(per_cat[c] for c in cats) for row, cats in SUMMARY_ROWS}

    def decode(self, indices: np.ndarray | list[int]) -> list[tuple[str, str]]:
        return [self.entries[int(i)] for i in indices]


@dataclass
class SparseFeatureVector:
    dimension: int
    indices: np.ndarray  # strictly increasing, all < dimension
    label: str | None = None
    path: str = "<memory>"


@dataclass
class SparseDataset:
    vocab: TokenVocabulary
    rows: list[SparseFeatureVector]

    @property
    def labels(self) -> list[str | None]:
        return [r.label for r in self.rows]

    def to_dense(self) -> np.ndarray:
        """Dense (n_samples, vocab_size) uint8 presence matrix."""
        X = np.zeros((len(self.rows), len(self.vocab)), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            X[i, row.indices] = 1
        return X

    def labels_pm1(self) -> np.ndarray:
        if any(lab is None for lab in self.labels):
            raise RansomkitError("dataset has unlabeled rows")
        return labels_to_pm1([lab for lab in self.labels if lab is not None])


def build_vocabulary(reports: list[BehaviorReport], min_df: int = 1) -> TokenVocabulary:
    """Vocabulary of every (category, token) appearing in >= min_df reports.

    Order is fixed: categories in CATEGORY_ORDER, tokens lexicographic
    within a category, so the same corpus always produces a byte-identical
    vocabulary file.
    """
    if not reports:
        raise EmptyCorpusError("no reports to build a vocabulary from")
    df: Counter[tuple[str, str]] = Counter()
    for report in reports:
        df.update(set(report_token_pairs(report)))
    kept = [pair for pair, n in df.items() if n >= min_df]
    kept.sort(key=lambda p: (_CATEGORY_RANK[p[0]], p[1]))
    return TokenVocabulary(entries=kept)


def vectorize(report: BehaviorReport, vocab: TokenVocabulary) -> SparseFeatureVector:
    """Binary presence encoding; out-of-vocabulary tokens are dropped."""
    active = {
        vocab.index[pair]
        for pair in report_token_pairs(report)
        if pair in vocab.index
    }
    return SparseFeatureVector(
        dimension=len(vocab),
        indices=np.array(sorted(active), dtype=np.int64),
        label=report.label,
        path=report.source_path,
    )


def batch_extract_dynamic(
    entries: list[ManifestEntry],
    min_df: int = 1,
    vocab_paths: set[str] | None = None,
) -> tuple[TokenVocabulary, SparseDataset, list[LedgerEntry]]:
    """Parse a report manifest and encode it over a freshly built vocabulary.

    `vocab_paths` restricts vocabulary construction to a subset of the
    manifest (the pipeline passes its training partition so test reports
    cannot leak tokens); by default the whole corpus is used.
    """
    if not entries:
        raise EmptyCorpusError("empty manifest")
    reports: list[BehaviorReport] = []
    ledger: list[LedgerEntry] = []
    for entry in entries:
        try:
            reports.append(parse_report_file(entry.path, label=entry.label))
        except (RansomkitError, OSError) as exc:
            ledger.append(LedgerEntry(path=entry.path, error=f"{type(exc).__name__}: {exc}"))
    if not reports:
        raise EmptyCorpusError("no report parsed successfully")
    vocab_reports = (
        [r for r in reports if r.source_path in vocab_paths]
        if vocab_paths is not None
        else reports
    )
    vocab = build_vocabulary(vocab_reports, min_df=min_df)
    dataset = SparseDataset(vocab=vocab, rows=[vectorize(r, vocab) for r in reports])
    return vocab, dataset, ledger


# --- file formats ----------------------------------------------------------

def write_vocabulary(path: str | Path, vocab: TokenVocabulary) -> None:
    """One `category<TAB>token` line per entry; line number = index."""
    with open(path, "w", encoding="utf-8") as fh:
        for category, token in vocab.entries:
            fh.write(f"{category}\t{token}\n")


def read_vocabulary(path: str | Path) -> TokenVocabulary:
    entries: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            category, token = line.split("\t", 1)
            entries.append((category, token))
    return TokenVocabulary(entries=entries)


def write_sparse_dataset(path: str | Path, dataset: SparseDataset) -> None:
    """One `path,label,i1 i2 i3 ...` line per sample."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "active_indices"])
        for row in dataset.rows:
            writer.writerow([row.path, row.label or "", " ".join(str(i) for i in row.indices)])


def read_sparse_dataset(path: str | Path, vocab: TokenVocabulary) -> SparseDataset:
    rows: list[SparseFeatureVector] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for rec in reader:
            indices = np.array([int(x) for x in rec[2].split()] if rec[2] else [], dtype=np.int64)
            rows.append(
                SparseFeatureVector(
                    dimension=len(vocab), indices=indices, label=rec[1] or None, path=rec[0]
                )
            )
    return SparseDataset(vocab=vocab, rows=rows)
