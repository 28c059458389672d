from ransomkit.pe.checksum import ChecksumResult, compute_checksum, validate_checksum
from ransomkit.pe.entropy import compute_entropy
from ransomkit.pe.features import (
    FEATURE_NAMES,
    StaticFeatureVector,
    batch_extract_static,
    extract_file,
    extract_static_features,
    feature_names,
    manifest_file_names,
    read_feature_csv,
    write_feature_csv,
    write_feature_json,
)
from ransomkit.pe.parser import ParsedPE, RawImage, parse_pe

__all__ = [
    "ChecksumResult",
    "compute_checksum",
    "validate_checksum",
    "compute_entropy",
    "FEATURE_NAMES",
    "StaticFeatureVector",
    "batch_extract_static",
    "extract_file",
    "extract_static_features",
    "feature_names",
    "manifest_file_names",
    "read_feature_csv",
    "write_feature_csv",
    "write_feature_json",
    "ParsedPE",
    "RawImage",
    "parse_pe",
]
