from ransomkit.detection.crossval import (
    CvResult,
    k_fold_cv,
    stratified_fold_indices,
    stratified_split_indices,
)
from ransomkit.detection.forest import (
    RandomForestModel,
    forest_from_dict,
    forest_to_dict,
    load_forest,
    rf_predict,
    rf_score,
    save_forest,
    train_random_forest,
)
from ransomkit.detection.metrics import (
    EvaluationReport,
    evaluate,
    report_to_dict,
    roc_auc,
    write_evaluation_json,
    write_roc_csv,
)
from ransomkit.detection.scaling import Standardizer
from ransomkit.detection.svm import (
    SvmModel,
    kernel_matrix,
    load_svm,
    save_svm,
    svm_decision,
    svm_from_dict,
    svm_predict,
    svm_to_dict,
    train_svm,
)

__all__ = [
    "CvResult",
    "k_fold_cv",
    "stratified_fold_indices",
    "stratified_split_indices",
    "RandomForestModel",
    "forest_from_dict",
    "forest_to_dict",
    "load_forest",
    "rf_predict",
    "rf_score",
    "save_forest",
    "train_random_forest",
    "EvaluationReport",
    "evaluate",
    "report_to_dict",
    "roc_auc",
    "write_evaluation_json",
    "write_roc_csv",
    "Standardizer",
    "SvmModel",
    "kernel_matrix",
    "load_svm",
    "save_svm",
    "svm_decision",
    "svm_from_dict",
    "svm_predict",
    "svm_to_dict",
    "train_svm",
]
