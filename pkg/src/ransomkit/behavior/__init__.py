from ransomkit.behavior.report import (
    OP_KINDS,
    BehaviorReport,
    normalize_token,
    parse_report,
    parse_report_file,
    registry_sequence,
)
from ransomkit.behavior.vectorize import (
    CATEGORY_ORDER,
    SUMMARY_ROWS,
    SparseDataset,
    SparseFeatureVector,
    TokenVocabulary,
    batch_extract_dynamic,
    build_vocabulary,
    read_sparse_dataset,
    read_vocabulary,
    report_token_pairs,
    vectorize,
    write_sparse_dataset,
    write_vocabulary,
)

__all__ = [
    "OP_KINDS",
    "BehaviorReport",
    "normalize_token",
    "parse_report",
    "parse_report_file",
    "registry_sequence",
    "CATEGORY_ORDER",
    "SUMMARY_ROWS",
    "SparseDataset",
    "SparseFeatureVector",
    "TokenVocabulary",
    "batch_extract_dynamic",
    "build_vocabulary",
    "read_sparse_dataset",
    "read_vocabulary",
    "report_token_pairs",
    "vectorize",
    "write_sparse_dataset",
    "write_vocabulary",
]
