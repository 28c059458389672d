"""Dataset manifests: CSV files with a `path,label` header row.

Labels are the strings "benign" and "malicious"; malicious is the positive
class everywhere in this package (detection flags ransomware, so the costly
error is calling a malicious file benign).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LABEL_BENIGN = "benign"
LABEL_MALICIOUS = "malicious"
LABELS = (LABEL_BENIGN, LABEL_MALICIOUS)


@dataclass
class ManifestEntry:
    path: str
    label: str


@dataclass
class LedgerEntry:
    """One per-file failure collected during a batch run."""

    path: str
    error: str


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a `path,label` CSV. Raises ValueError on a bad header or label."""
    entries: list[ManifestEntry] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["path", "label"]:
            raise ValueError(f"manifest {path}: expected header 'path,label'")
        for row in reader:
            if not row or not row[0].strip():
                continue
            label = row[1].strip() if len(row) > 1 else ""
            if label not in LABELS:
                raise ValueError(f"manifest {path}: unknown label {label!r}")
            entries.append(ManifestEntry(path=row[0].strip(), label=label))
    return entries


def write_manifest(path: str | Path, entries: list[ManifestEntry]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label"])
        for e in entries:
            writer.writerow([e.path, e.label])


def labels_to_pm1(labels: list[str] | np.ndarray) -> np.ndarray:
    """Map benign/malicious to -1/+1 (malicious positive)."""
    return np.asarray([1 if lab == LABEL_MALICIOUS else -1 for lab in labels], dtype=np.int64)
