"""The 89-feature static vector and its dataset plumbing.

Feature names and their order are fixed by `static_manifest.txt`, which
ships with the package; `feature_names()` must match it byte for byte.
Absent structures (no resources, no load config) contribute zeros so every
file yields a dense, fixed-length vector.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ransomkit.errors import RansomkitError
from ransomkit.manifest import LedgerEntry, ManifestEntry
from ransomkit.pe.checksum import validate_checksum
from ransomkit.pe.entropy import compute_entropy
from ransomkit.pe.parser import (
    DIR_EXPORT,
    DIR_IMPORT,
    DOS_FIELD_NAMES,
    LOAD_CONFIG_FIELD_NAMES,
    ParsedPE,
    RawImage,
    parse_pe,
    section_raw_bytes,
)

_OPTIONAL_FEATURES = (
    "SizeOfCode", "SizeOfInitializedData", "SizeOfUninitializedData",
    "AddressOfEntryPoint", "ImageBase", "SectionAlignment", "FileAlignment",
    "MajorImageVersion", "MinorImageVersion", "SizeOfImage", "SizeOfHeaders",
    "CheckSum", "Subsystem", "DllCharacteristics", "SizeOfStackReserve",
    "SizeOfStackCommit", "SizeOfHeapReserve", "SizeOfHeapCommit",
    "LoaderFlags", "NumberOfRvaAndSizes", "Magic", "MajorLinkerVersion",
    "MinorLinkerVersion", "BaseOfCode", "MajorOperatingSystemVersion",
    "MajorSubsystemVersion",
)

_SECTION_FEATURES = (
    "section_count",
    "section_entropy_mean", "section_entropy_min", "section_entropy_max",
    "section_rawsize_mean", "section_rawsize_min", "section_rawsize_max",
    "section_vsize_mean", "section_vsize_min", "section_vsize_max",
    "section_executable_count", "section_writable_count",
)

_COFF_FEATURES = (
    "Machine", "NumberOfSections", "TimeDateStamp", "PointerToSymbolTable",
    "NumberOfSymbols", "SizeOfOptionalHeader", "Characteristics",
    "file_entropy", "header_entropy",
)

_RESOURCE_FEATURES = (
    "resource_entry_count", "resource_total_size", "resource_max_size",
    "resource_depth",
)

_LOAD_CONFIG_FEATURES = tuple(f"load_config_{name}" for name in LOAD_CONFIG_FIELD_NAMES)

_DERIVED_FEATURES = (
    "checksum_matches", "import_dir_size", "export_dir_size",
    "image_size_ratio", "code_size_ratio",
    "high_entropy_section_count", "zero_size_section_count",
)

FEATURE_NAMES: tuple[str, ...] = (
    _OPTIONAL_FEATURES
    + _SECTION_FEATURES
    + DOS_FIELD_NAMES
    + ("e_res_sum",)
    + _COFF_FEATURES
    + _RESOURCE_FEATURES
    + _LOAD_CONFIG_FEATURES
    + _DERIVED_FEATURES
)

FEATURE_COUNT = len(FEATURE_NAMES)
assert FEATURE_COUNT == 89

FEATURE_CATEGORIES: dict[str, tuple[str, ...]] = {
    "optional_header": _OPTIONAL_FEATURES,
    "section_header": _SECTION_FEATURES,
    "dos_header": DOS_FIELD_NAMES + ("e_res_sum",),
    "pe_file_header": _COFF_FEATURES,
    "directory_entry_resource": _RESOURCE_FEATURES,
    "directory_entry_load_config": _LOAD_CONFIG_FEATURES,
    "derived": _DERIVED_FEATURES,
}

_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}


def feature_names() -> list[str]:
    """The 89 feature names in canonical order."""
    return list(FEATURE_NAMES)


def manifest_file_names() -> list[str]:
    """Feature names as shipped in static_manifest.txt (one per line)."""
    text = resources.files("ransomkit.pe").joinpath("static_manifest.txt").read_text()
    return text.splitlines()


@dataclass
class StaticFeatureVector:
    values: np.ndarray  # shape (89,), float64, never NaN
    label: str | None = None
    path: str = "<memory>"

    def __getitem__(self, name: str) -> float:
        return float(self.values[_INDEX[name]])


def _triple(values: list[float]) -> tuple[float, float, float]:
    if not values:
        return 0.0, 0.0, 0.0
    return float(np.mean(values)), float(min(values)), float(max(values))


def extract_static_features(
    pe: ParsedPE, image: RawImage | bytes, label: str | None = None
) -> StaticFeatureVector:
    """Compute the 89 static features from a parsed PE and its raw bytes."""
    data = image.data if isinstance(image, RawImage) else image
    path = image.source_path if isinstance(image, RawImage) else "<memory>"
    v: dict[str, float] = {}

    for name in _OPTIONAL_FEATURES:
        v[name] = float(getattr(pe.optional, name))
    for name in DOS_FIELD_NAMES:
        v[name] = float(getattr(pe.dos, name))
    v["e_res_sum"] = float(pe.dos.e_res_sum)
    for name in _COFF_FEATURES[:7]:
        v[name] = float(getattr(pe.coff, name))

    entropies = [compute_entropy(section_raw_bytes(s, data)) for s in pe.sections]
    raw_sizes = [float(s.SizeOfRawData) for s in pe.sections]
    vsizes = [float(s.VirtualSize) for s in pe.sections]
    v["section_count"] = float(len(pe.sections))
    (v["section_entropy_mean"], v["section_entropy_min"], v["section_entropy_max"]) = _triple(entropies)
    (v["section_rawsize_mean"], v["section_rawsize_min"], v["section_rawsize_max"]) = _triple(raw_sizes)
    (v["section_vsize_mean"], v["section_vsize_min"], v["section_vsize_max"]) = _triple(vsizes)
    v["section_executable_count"] = float(sum(s.executable for s in pe.sections))
    v["section_writable_count"] = float(sum(s.writable for s in pe.sections))

    v["file_entropy"] = compute_entropy(data)
    header_len = min(pe.optional.SizeOfHeaders, len(data))
    v["header_entropy"] = compute_entropy(data[:header_len])

    v["resource_entry_count"] = float(pe.resources.entry_count)
    v["resource_total_size"] = float(pe.resources.total_size)
    v["resource_max_size"] = float(pe.resources.max_size)
    v["resource_depth"] = float(pe.resources.depth)

    for name in LOAD_CONFIG_FIELD_NAMES:
        v[f"load_config_{name}"] = float(pe.load_config.values[name])

    v["checksum_matches"] = 1.0 if validate_checksum(pe, data).matches else 0.0
    v["import_dir_size"] = float(pe.data_directories[DIR_IMPORT].size)
    v["export_dir_size"] = float(pe.data_directories[DIR_EXPORT].size)
    v["image_size_ratio"] = pe.optional.SizeOfImage / len(data)
    v["code_size_ratio"] = pe.optional.SizeOfCode / len(data)
    v["high_entropy_section_count"] = float(sum(e > 7.0 for e in entropies))
    v["zero_size_section_count"] = float(sum(s.SizeOfRawData == 0 for s in pe.sections))

    values = np.array([v[name] for name in FEATURE_NAMES], dtype=np.float64)
    if not np.isfinite(values).all():
        raise RansomkitError(f"non-finite feature computed for {path}")
    return StaticFeatureVector(values=values, label=label, path=path)


def extract_file(path: str | Path, label: str | None = None) -> StaticFeatureVector:
    image = RawImage.from_file(path)
    return extract_static_features(parse_pe(image), image, label=label)


def batch_extract_static(
    entries: list[ManifestEntry],
) -> tuple[list[StaticFeatureVector], list[LedgerEntry]]:
    """Extract every manifest entry; per-file failures go to the ledger."""
    rows: list[StaticFeatureVector] = []
    ledger: list[LedgerEntry] = []
    for entry in entries:
        try:
            rows.append(extract_file(entry.path, label=entry.label))
        except (RansomkitError, OSError) as exc:
            ledger.append(LedgerEntry(path=entry.path, error=f"{type(exc).__name__}: {exc}"))
    return rows, ledger


def write_feature_csv(path: str | Path, rows: list[StaticFeatureVector]) -> None:
    """CSV layout: path, the 89 manifest-ordered columns, label."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", *FEATURE_NAMES, "label"])
        for row in rows:
            writer.writerow([row.path, *(repr(float(x)) for x in row.values), row.label or ""])


def read_feature_csv(path: str | Path) -> list[StaticFeatureVector]:
    rows: list[StaticFeatureVector] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["path", *FEATURE_NAMES, "label"]:
            raise ValueError(f"{path}: header does not match the static feature manifest")
        for rec in reader:
            values = np.array([float(x) for x in rec[1:-1]], dtype=np.float64)
            rows.append(StaticFeatureVector(values=values, label=rec[-1] or None, path=rec[0]))
    return rows


def write_feature_json(path: str | Path, rows: list[StaticFeatureVector]) -> None:
    """JSON variant of the feature table, same field names as the CSV."""
    payload = [
        {
            "path": row.path,
            **{name: float(x) for name, x in zip(FEATURE_NAMES, row.values)},
            "label": row.label,
        }
        for row in rows
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")
