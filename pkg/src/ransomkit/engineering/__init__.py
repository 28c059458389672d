from ransomkit.engineering.mi import (
    MiScoreTable,
    binarize_at_median,
    entropy_bits,
    mutual_information,
    rank_by_mi,
)
from ransomkit.engineering.ngrams import (
    ClassNgramReport,
    NGramTable,
    class_ngram_report,
    cooccurrence_probability,
    extract_ngrams,
    report_to_json,
    summarize,
)
from ransomkit.engineering.pca import (
    PcaModel,
    components_for_variance,
    fit_pca,
    inverse_transform,
    jacobi_eigh,
    scree,
    transform,
)
from ransomkit.engineering.wrapper import (
    SelectionStep,
    SelectionTrace,
    greedy_wrapper_select,
    linear_svm_evaluator,
)

__all__ = [
    "MiScoreTable",
    "binarize_at_median",
    "entropy_bits",
    "mutual_information",
    "rank_by_mi",
    "ClassNgramReport",
    "NGramTable",
    "class_ngram_report",
    "cooccurrence_probability",
    "extract_ngrams",
    "report_to_json",
    "summarize",
    "PcaModel",
    "components_for_variance",
    "fit_pca",
    "inverse_transform",
    "jacobi_eigh",
    "scree",
    "transform",
    "SelectionStep",
    "SelectionTrace",
    "greedy_wrapper_select",
    "linear_svm_evaluator",
]
