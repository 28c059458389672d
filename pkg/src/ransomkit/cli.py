"""Command-line orchestration of the extraction / engineering / detection flow.

Commands: extract-static, extract-dynamic, pca, mi-rank, select, ngram,
train, evaluate, pipeline. Exit codes: 0 success, 2 usage or input error,
3 internal numerical failure. Every command validates its inputs before
writing anything, and run artifacts carry no wall-clock state so identical
config + corpus + seed reproduces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

import ransomkit
from ransomkit.behavior import (
    SparseDataset,
    build_vocabulary,
    parse_report_file,
    read_sparse_dataset,
    read_vocabulary,
    vectorize,
    write_sparse_dataset,
    write_vocabulary,
)
from ransomkit.detection import (
    Standardizer,
    evaluate,
    forest_from_dict,
    forest_to_dict,
    k_fold_cv,
    rf_predict,
    rf_score,
    stratified_split_indices,
    svm_decision,
    svm_from_dict,
    svm_predict,
    svm_to_dict,
    train_random_forest,
    train_svm,
    write_evaluation_json,
    write_roc_csv,
)
from ransomkit.engineering import (
    binarize_at_median,
    class_ngram_report,
    components_for_variance,
    fit_pca,
    greedy_wrapper_select,
    linear_svm_evaluator,
    rank_by_mi,
    report_to_json,
    summarize,
)
from ransomkit.errors import (
    EmptyCorpusError,
    FoldTooSmallError,
    InvalidNError,
    RansomkitError,
    SingleClassError,
)
from ransomkit.manifest import LedgerEntry, labels_to_pm1, read_manifest
from ransomkit.pe import (
    FEATURE_NAMES,
    batch_extract_static,
    feature_names,
    read_feature_csv,
    write_feature_csv,
    write_feature_json,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_INPUT_ERRORS = (
    OSError,
    ValueError,
    KeyError,
    IndexError,
    EmptyCorpusError,
    SingleClassError,
    FoldTooSmallError,
    InvalidNError,
)


@dataclass
class RunConfig:
    mode: str = "dynamic"
    manifest: str = ""
    out_dir: str = ""
    seed: int = 0
    min_df: int = 1
    mi_prefilter: int = 2000
    wrapper_candidates: int = 500
    wrapper_k_max: int = 10
    pca_variance_threshold: float = 0.999
    split_fraction: float = 0.8
    cv_folds: int = 5
    classifier: str = "svm"
    kernel: str = "rbf"
    svm_c_grid: tuple[float, ...] = (0.1, 1.0, 10.0, 100.0)
    svm_gamma_grid: tuple[float, ...] = (0.001, 0.013, 0.1, 1.0)
    forest_trees: int | None = None  # default: 800 static, 200 dynamic
    ngram_kind: str = "delete"
    ngram_sizes: tuple[int, ...] = (3, 4)

    def resolved_forest_trees(self) -> int:
        if self.forest_trees is not None:
            return self.forest_trees
        return 800 if self.mode == "static" else 200

    def validate(self) -> None:
        if self.mode not in ("static", "dynamic"):
            raise ValueError(f"mode must be static or dynamic, got {self.mode!r}")
        if not 0 < self.split_fraction < 1:
            raise ValueError(f"split_fraction must be in (0, 1), got {self.split_fraction}")
        if not 0 < self.pca_variance_threshold <= 1:
            raise ValueError(
                f"pca_variance_threshold must be in (0, 1], got {self.pca_variance_threshold}"
            )
        if self.classifier not in ("svm", "forest"):
            raise ValueError(f"classifier must be svm or forest, got {self.classifier!r}")
        if self.kernel not in ("linear", "rbf"):
            raise ValueError(f"kernel must be linear or rbf, got {self.kernel!r}")

    def to_ini(self) -> str:
        parser = configparser.ConfigParser()
        parser["run"] = {
            "mode": self.mode,
            "manifest": self.manifest,
            "out_dir": self.out_dir,
            "seed": str(self.seed),
            "split_fraction": repr(self.split_fraction),
        }
        parser["features"] = {
            "min_df": str(self.min_df),
            "mi_prefilter": str(self.mi_prefilter),
            "wrapper_candidates": str(self.wrapper_candidates),
            "wrapper_k_max": str(self.wrapper_k_max),
            "pca_variance_threshold": repr(self.pca_variance_threshold),
            "ngram_kind": self.ngram_kind,
            "ngram_sizes": " ".join(str(n) for n in self.ngram_sizes),
        }
        parser["detection"] = {
            "classifier": self.classifier,
            "kernel": self.kernel,
            "cv_folds": str(self.cv_folds),
            "svm_c_grid": " ".join(repr(c) for c in self.svm_c_grid),
            "svm_gamma_grid": " ".join(repr(g) for g in self.svm_gamma_grid),
            "forest_trees": str(self.resolved_forest_trees()),
        }
        out = io.StringIO()
        parser.write(out)
        return out.getvalue()


_INI_LOCATION = {
    "mode": ("run", str), "manifest": ("run", str), "out_dir": ("run", str),
    "seed": ("run", int), "split_fraction": ("run", float),
    "min_df": ("features", int), "mi_prefilter": ("features", int),
    "wrapper_candidates": ("features", int), "wrapper_k_max": ("features", int),
    "pca_variance_threshold": ("features", float), "ngram_kind": ("features", str),
    "ngram_sizes": ("features", lambda s: tuple(int(x) for x in s.split())),
    "classifier": ("detection", str), "kernel": ("detection", str),
    "cv_folds": ("detection", int),
    "svm_c_grid": ("detection", lambda s: tuple(float(x) for x in s.split())),
    "svm_gamma_grid": ("detection", lambda s: tuple(float(x) for x in s.split())),
    "forest_trees": ("detection", int),
}


def load_config_file(path: str | Path) -> RunConfig:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(f"config file {path} not found")
    config = RunConfig()
    for name, (section, conv) in _INI_LOCATION.items():
        if parser.has_option(section, name):
            setattr(config, name, conv(parser.get(section, name)))
    return config


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = load_config_file(args.config) if getattr(args, "config", None) else RunConfig()
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(config, f.name, value)
    config.validate()
    return config


class RunWriter:
    """Collects written artifacts and finalizes the run log and digest index."""

    def __init__(self, out_dir: str | Path):
        self.out = Path(out_dir)
        self.names: list[str] = []

    def prepare(self) -> None:
        self.out.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        self.names.append(name)
        return self.out / name

    def finalize(self, config: RunConfig) -> None:
        log = self.path("run.log")
        log.write_text(
            f"ransomkit {ransomkit.__version__}\nnumpy {np.__version__}\n\n{config.to_ini()}",
            encoding="utf-8",
        )
        digests = {
            name: hashlib.sha256((self.out / name).read_bytes()).hexdigest()
            for name in sorted(set(self.names))
        }
        index = {"format": "ransomkit-artifacts-v1", "files": digests}
        (self.out / "artifacts.json").write_text(
            json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _write_ledger(writer: RunWriter, ledger: list[LedgerEntry]) -> None:
    with open(writer.path("extract_errors.csv"), "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["path", "error"])
        for entry in ledger:
            out.writerow([entry.path, entry.error])


# --- dataset loading ---------------------------------------------------------

@dataclass
class LoadedData:
    X: np.ndarray                  # (n, d) float64 or uint8
    names: list[str]               # feature names, length d
    labels: list[str | None]
    paths: list[str]
    mode: str                      # static | dynamic

    def y(self) -> np.ndarray:
        if any(lab is None for lab in self.labels):
            raise ValueError("dataset rows are not all labeled")
        return labels_to_pm1([lab for lab in self.labels if lab is not None])

    def binary_view(self) -> np.ndarray:
        """Presence matrix for MI and wrapper work (median split if real)."""
        if self.mode == "dynamic":
            return self.X
        return binarize_at_median(self.X)


def _load_data(args: argparse.Namespace) -> LoadedData:
    features = getattr(args, "features", None)
    sparse = getattr(args, "sparse", None)
    vocab_path = getattr(args, "vocab", None)
    if features and sparse:
        raise ValueError("pass either --features or --sparse/--vocab, not both")
    if features:
        rows = read_feature_csv(features)
        if not rows:
            raise EmptyCorpusError(f"{features} has no rows")
        return LoadedData(
            X=np.stack([r.values for r in rows]),
            names=feature_names(),
            labels=[r.label for r in rows],
            paths=[r.path for r in rows],
            mode="static",
        )
    if sparse:
        if not vocab_path:
            raise ValueError("--sparse requires --vocab")
        vocab = read_vocabulary(vocab_path)
        dataset = read_sparse_dataset(sparse, vocab)
        if not dataset.rows:
            raise EmptyCorpusError(f"{sparse} has no rows")
        return LoadedData(
            X=dataset.to_dense(),
            names=[f"{cat}:{tok}" for cat, tok in vocab.entries],
            labels=dataset.labels,
            paths=[r.path for r in dataset.rows],
            mode="dynamic",
        )
    raise ValueError("no input dataset: pass --features or --sparse/--vocab")


# --- engineering report writers ---------------------------------------------

def _write_scree_csv(writer: RunWriter, model) -> None:
    cumulative = np.cumsum(model.explained_variance_ratio)
    with open(writer.path("scree.csv"), "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["component", "eigenvalue", "cumulative_ratio"])
        for i, (ev, cum) in enumerate(zip(model.eigenvalues, cumulative), start=1):
            out.writerow([i, repr(float(ev)), repr(float(cum))])


def _write_mi_csv(writer: RunWriter, table, names: list[str]) -> None:
    with open(writer.path("mi.csv"), "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["rank", "feature_index", "feature_name", "mi_bits"])
        for rank, idx in enumerate(table.order, start=1):
            out.writerow([rank, int(idx), names[int(idx)], repr(float(table.scores[idx]))])


def _write_selection_csv(writer: RunWriter, trace) -> None:
    with open(writer.path("selection.csv"), "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["k", "added_feature", "accuracy"])
        for step in trace.steps:
            out.writerow([step.k, step.feature, repr(step.accuracy)])


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# --- model bundles ------------------------------------------------------------

def _build_grid(config: RunConfig) -> list[dict]:
    if config.classifier == "forest":
        return [{"n_trees": config.resolved_forest_trees(), "seed": config.seed}]
    if config.kernel == "linear":
        return [{"kernel": "linear", "C": c} for c in config.svm_c_grid]
    return [
        {"kernel": "rbf", "C": c, "gamma": g}
        for c in config.svm_c_grid
        for g in config.svm_gamma_grid
    ]


def _trainer(config: RunConfig):
    if config.classifier == "forest":
        def train(X, y, params):
            model = train_random_forest(X, y, n_trees=params["n_trees"], seed=params["seed"])
            return lambda Z: rf_predict(model, Z)
        return train

    def train(X, y, params):
        model = train_svm(X, y, kernel=params["kernel"], C=params["C"],
                          gamma=params.get("gamma"))
        return lambda Z: svm_predict(model, Z)
    return train


def fit_bundle(
    X: np.ndarray,
    y: np.ndarray,
    config: RunConfig,
    feature_indices: list[int] | None = None,
) -> tuple[dict, dict]:
    """Cross-validate the grid, refit the winner, and package the model."""
    Xs = X[:, feature_indices] if feature_indices is not None else X
    scaler = None
    if config.mode == "static" and config.classifier == "svm":
        scaler = Standardizer.fit(Xs)
        Xf = scaler.transform(Xs)
    else:
        Xf = np.asarray(Xs, dtype=np.float64)
    cv = k_fold_cv(Xf, y, _build_grid(config), _trainer(config),
                   k=config.cv_folds, seed=config.seed)
    params = cv.best_params
    if config.classifier == "forest":
        model = train_random_forest(Xf, y, n_trees=params["n_trees"], seed=params["seed"])
        payload = forest_to_dict(model)
    else:
        model = train_svm(Xf, y, kernel=params["kernel"], C=params["C"],
                          gamma=params.get("gamma"))
        payload = svm_to_dict(model)
    bundle = {
        "format": "ransomkit-model-bundle-v1",
        "classifier": config.classifier,
        "mode": config.mode,
        "feature_indices": feature_indices,
        "standardizer": scaler.to_dict() if scaler else None,
        "best_params": params,
        "payload": payload,
    }
    return bundle, cv.to_dict()


def bundle_predict(bundle: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(predictions, scores) of a saved model bundle on a feature matrix."""
    if bundle.get("format") != "ransomkit-model-bundle-v1":
        raise ValueError(f"not a model bundle: {bundle.get('format')!r}")
    Xs = np.asarray(X, dtype=np.float64)
    if bundle["feature_indices"] is not None:
        Xs = Xs[:, bundle["feature_indices"]]
    if bundle["standardizer"] is not None:
        Xs = Standardizer.from_dict(bundle["standardizer"]).transform(Xs)
    if bundle["classifier"] == "forest":
        model = forest_from_dict(bundle["payload"])
        return rf_predict(model, Xs), rf_score(model, Xs)
    model = svm_from_dict(bundle["payload"])
    return svm_predict(model, Xs), svm_decision(model, Xs)


# --- commands -----------------------------------------------------------------

def cmd_extract_static(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    entries = read_manifest(config.manifest)
    if not entries:
        raise EmptyCorpusError(f"manifest {config.manifest} is empty")
    rows, ledger = batch_extract_static(entries)
    if not rows:
        raise EmptyCorpusError("no file extracted successfully")
    writer = RunWriter(config.out_dir)
    writer.prepare()
    write_feature_csv(writer.path("features.csv"), rows)
    write_feature_json(writer.path("features.json"), rows)
    writer.path("static_manifest.txt").write_text(
        "\n".join(FEATURE_NAMES) + "\n", encoding="utf-8"
    )
    _write_ledger(writer, ledger)
    writer.finalize(config)
    print(f"extracted {len(rows)} files, {len(ledger)} failures -> {writer.out}")
    return EXIT_OK


def cmd_extract_dynamic(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    entries = read_manifest(config.manifest)
    if not entries:
        raise EmptyCorpusError(f"manifest {config.manifest} is empty")
    reports, ledger = _parse_reports(entries)
    vocab = build_vocabulary(reports, min_df=config.min_df)
    dataset = SparseDataset(vocab=vocab, rows=[vectorize(r, vocab) for r in reports])
    writer = RunWriter(config.out_dir)
    writer.prepare()
    write_vocabulary(writer.path("vocabulary.tsv"), vocab)
    write_sparse_dataset(writer.path("sparse.csv"), dataset)
    _write_json(writer.path("extraction_summary.json"), {
        "reports": len(reports),
        "vocabulary_size": len(vocab),
        "category_counts": vocab.category_counts(),
        "summary_counts": vocab.summary_counts(),
    })
    _write_ledger(writer, ledger)
    writer.finalize(config)
    print(f"extracted {len(reports)} reports, vocabulary {len(vocab)} -> {writer.out}")
    return EXIT_OK


def _parse_reports(entries):
    reports, ledger = [], []
    for entry in entries:
        try:
            reports.append(parse_report_file(entry.path, label=entry.label))
        except (RansomkitError, OSError) as exc:
            ledger.append(LedgerEntry(path=entry.path, error=f"{type(exc).__name__}: {exc}"))
    if not reports:
        raise EmptyCorpusError("no report parsed successfully")
    return reports, ledger


def cmd_pca(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data = _load_data(args)
    X = np.asarray(data.X, dtype=np.float64)
    prefilter: list[int] | None = None
    if data.mode == "dynamic" and X.shape[1] > config.mi_prefilter:
        table = rank_by_mi(data.binary_view(), data.y())
        prefilter = [int(i) for i in table.top(config.mi_prefilter)]
        X = X[:, prefilter]
    model = fit_pca(X)
    k = components_for_variance(model, config.pca_variance_threshold)
    writer = RunWriter(config.out_dir)
    writer.prepare()
    _write_scree_csv(writer, model)
    _write_json(writer.path("pca_summary.json"), {
        "dimensions": int(X.shape[1]),
        "prefiltered_to": prefilter,
        "variance_threshold": config.pca_variance_threshold,
        "components_for_threshold": k,
    })
    writer.finalize(config)
    print(f"{k} components reach {config.pca_variance_threshold:.3%} variance -> {writer.out}")
    return EXIT_OK


def cmd_mi_rank(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data = _load_data(args)
    table = rank_by_mi(data.binary_view(), data.y())
    writer = RunWriter(config.out_dir)
    writer.prepare()
    _write_mi_csv(writer, table, data.names)
    writer.finalize(config)
    print(f"ranked {len(table.scores)} features -> {writer.out}")
    return EXIT_OK


def cmd_select(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data = _load_data(args)
    X = data.binary_view()
    y = data.y()
    table = rank_by_mi(X, y)
    trace = greedy_wrapper_select(
        X, y, linear_svm_evaluator(seed=config.seed),
        k_max=min(config.wrapper_k_max, X.shape[1]),
        candidates=table.top(config.wrapper_candidates),
    )
    writer = RunWriter(config.out_dir)
    writer.prepare()
    _write_selection_csv(writer, trace)
    _write_json(writer.path("selection_summary.json"), {
        "selected": trace.selected,
        "best_k": trace.best_k(),
        "best_features": [data.names[i] for i in trace.best_prefix()],
    })
    writer.finalize(config)
    print(f"selected {trace.best_k()} of {len(trace.selected)} traced features -> {writer.out}")
    return EXIT_OK


def cmd_ngram(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    entries = read_manifest(config.manifest)
    if not entries:
        raise EmptyCorpusError(f"manifest {config.manifest} is empty")
    reports, _ledger = _parse_reports(entries)
    report = class_ngram_report(reports, config.ngram_kind, tuple(config.ngram_sizes))
    writer = RunWriter(config.out_dir)
    writer.prepare()
    _write_json(writer.path("ngram.json"), report_to_json(report))
    writer.path("ngram_summary.txt").write_text(summarize(report) + "\n", encoding="utf-8")
    writer.finalize(config)
    print(summarize(report))
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data = _load_data(args)
    config.mode = data.mode
    y = data.y()
    train_idx, test_idx = stratified_split_indices(y, config.split_fraction, seed=config.seed)
    feature_indices = None
    if getattr(args, "selection", None):
        summary = json.loads(Path(args.selection).read_text(encoding="utf-8"))
        feature_indices = summary["selected"][: summary["best_k"]]
    bundle, cv_summary = fit_bundle(
        np.asarray(data.X, dtype=np.float64)[train_idx], y[train_idx], config,
        feature_indices=feature_indices,
    )
    writer = RunWriter(config.out_dir)
    writer.prepare()
    _write_json(writer.path("model.json"), bundle)
    _write_json(writer.path("cv_summary.json"), cv_summary)
    _write_json(writer.path("split.json"), {
        "train_indices": [int(i) for i in train_idx],
        "test_indices": [int(i) for i in test_idx],
        "train_fraction": config.split_fraction,
        "seed": config.seed,
    })
    writer.finalize(config)
    print(f"best params {bundle['best_params']} -> {writer.out}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data = _load_data(args)
    bundle = json.loads(Path(args.model).read_text(encoding="utf-8"))
    X = np.asarray(data.X, dtype=np.float64)
    y = data.y()
    if getattr(args, "split", None):
        split = json.loads(Path(args.split).read_text(encoding="utf-8"))
        part = getattr(args, "part", "test") or "test"
        idx = np.array(split[f"{part}_indices"], dtype=np.int64)
        X, y = X[idx], y[idx]
    preds, scores = bundle_predict(bundle, X)
    report = evaluate(y, preds, scores=scores)
    writer = RunWriter(config.out_dir)
    writer.prepare()
    write_evaluation_json(writer.path("evaluation.json"), report)
    write_roc_csv(writer.path("roc.csv"), report)
    writer.finalize(config)
    print(
        f"accuracy {report.accuracy:.4f} precision {report.precision:.4f} "
        f"recall {report.recall:.4f} f1 {report.f1:.4f} auc {report.auc:.4f}"
    )
    return EXIT_OK


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    entries = read_manifest(config.manifest)
    if not entries:
        raise EmptyCorpusError(f"manifest {config.manifest} is empty")
    if config.mode == "static":
        return _pipeline_static(config, entries)
    return _pipeline_dynamic(config, entries)


def _pipeline_static(config: RunConfig, entries) -> int:
    rows, ledger = batch_extract_static(entries)
    if not rows:
        raise EmptyCorpusError("no file extracted successfully")
    X = np.stack([r.values for r in rows])
    y = labels_to_pm1([r.label for r in rows])
    train_idx, test_idx = stratified_split_indices(y, config.split_fraction, seed=config.seed)

    writer = RunWriter(config.out_dir)
    writer.prepare()
    writer.path("config.ini").write_text(config.to_ini(), encoding="utf-8")
    write_feature_csv(writer.path("features.csv"), rows)
    write_feature_json(writer.path("features.json"), rows)
    _write_ledger(writer, ledger)

    Xtr, ytr = X[train_idx], y[train_idx]
    model = fit_pca(Xtr)
    _write_scree_csv(writer, model)
    _write_json(writer.path("pca_summary.json"), {
        "dimensions": int(X.shape[1]),
        "variance_threshold": config.pca_variance_threshold,
        "components_for_threshold": components_for_variance(
            model, config.pca_variance_threshold
        ),
    })
    table = rank_by_mi(binarize_at_median(Xtr), ytr)
    _write_mi_csv(writer, table, feature_names())

    bundle, cv_summary = fit_bundle(X[train_idx], ytr, config)
    _finish_pipeline(writer, config, bundle, cv_summary, X, y, train_idx, test_idx)
    return EXIT_OK


def _pipeline_dynamic(config: RunConfig, entries) -> int:
    reports, ledger = _parse_reports(entries)
    y = labels_to_pm1([r.label or "" for r in reports])
    train_idx, test_idx = stratified_split_indices(y, config.split_fraction, seed=config.seed)
    vocab = build_vocabulary([reports[i] for i in train_idx], min_df=config.min_df)
    dataset = SparseDataset(vocab=vocab, rows=[vectorize(r, vocab) for r in reports])
    X = dataset.to_dense()

    writer = RunWriter(config.out_dir)
    writer.prepare()
    writer.path("config.ini").write_text(config.to_ini(), encoding="utf-8")
    write_vocabulary(writer.path("vocabulary.tsv"), vocab)
    write_sparse_dataset(writer.path("sparse.csv"), dataset)
    _write_ledger(writer, ledger)
    _write_json(writer.path("extraction_summary.json"), {
        "reports": len(reports),
        "vocabulary_size": len(vocab),
        "category_counts": vocab.category_counts(),
        "summary_counts": vocab.summary_counts(),
    })

    Xtr, ytr = X[train_idx], y[train_idx]
    table = rank_by_mi(Xtr, ytr)
    _write_mi_csv(writer, table, [f"{cat}:{tok}" for cat, tok in vocab.entries])

    top_m = [int(i) for i in table.top(min(config.mi_prefilter, X.shape[1]))]
    pca_model = fit_pca(Xtr[:, top_m].astype(np.float64))
    _write_scree_csv(writer, pca_model)
    _write_json(writer.path("pca_summary.json"), {
        "dimensions": len(top_m),
        "variance_threshold": config.pca_variance_threshold,
        "components_for_threshold": components_for_variance(
            pca_model, config.pca_variance_threshold
        ),
    })

    trace = greedy_wrapper_select(
        Xtr, ytr, linear_svm_evaluator(seed=config.seed),
        k_max=min(config.wrapper_k_max, X.shape[1]),
        candidates=table.top(config.wrapper_candidates),
    )
    _write_selection_csv(writer, trace)
    selected = [int(i) for i in trace.best_prefix()]
    _write_json(writer.path("selection_summary.json"), {
        "selected": trace.selected,
        "best_k": trace.best_k(),
        "best_features": [f"{vocab.entries[i][0]}:{vocab.entries[i][1]}" for i in selected],
    })

    ngram_rep = class_ngram_report(
        [reports[i] for i in train_idx], config.ngram_kind, tuple(config.ngram_sizes)
    )
    _write_json(writer.path("ngram.json"), report_to_json(ngram_rep))
    writer.path("ngram_summary.txt").write_text(summarize(ngram_rep) + "\n", encoding="utf-8")

    bundle, cv_summary = fit_bundle(
        X[train_idx].astype(np.float64), ytr, config,
        feature_indices=selected if selected else None,
    )
    _finish_pipeline(writer, config, bundle, cv_summary, X.astype(np.float64), y,
                     train_idx, test_idx)
    return EXIT_OK


def _finish_pipeline(writer, config, bundle, cv_summary, X, y, train_idx, test_idx) -> None:
    _write_json(writer.path("model.json"), bundle)
    _write_json(writer.path("cv_summary.json"), cv_summary)
    _write_json(writer.path("split.json"), {
        "train_indices": [int(i) for i in train_idx],
        "test_indices": [int(i) for i in test_idx],
        "train_fraction": config.split_fraction,
        "seed": config.seed,
    })
    preds, scores = bundle_predict(bundle, X[test_idx])
    report = evaluate(y[test_idx], preds, scores=scores)
    write_evaluation_json(writer.path("evaluation.json"), report)
    write_roc_csv(writer.path("roc.csv"), report)
    writer.finalize(config)
    print(
        f"test accuracy {report.accuracy:.4f} precision {report.precision:.4f} "
        f"recall {report.recall:.4f} auc {report.auc:.4f} -> {writer.out}"
    )


# --- argument parsing ---------------------------------------------------------

def _add_config_flags(p: argparse.ArgumentParser, *, seed_required: bool = False) -> None:
    p.add_argument("--config", help="INI config file; flags override its values")
    p.add_argument("--out", dest="out_dir", required=True, help="output directory")
    p.add_argument("--seed", type=int, required=seed_required,
                   help="RNG seed (no wall-clock defaults)")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", help="static feature CSV")
    p.add_argument("--sparse", help="sparse dynamic dataset CSV")
    p.add_argument("--vocab", help="vocabulary TSV for --sparse")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ransomkit",
        description="PE/static and sandbox/dynamic ransomware feature pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract-static", help="parse PE files into the 89-feature table")
    p.add_argument("--manifest", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract_static)

    p = sub.add_parser("extract-dynamic", help="parse behavior reports into sparse vectors")
    p.add_argument("--manifest", required=True)
    p.add_argument("--min-df", dest="min_df", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract_dynamic)

    p = sub.add_parser("pca", help="fit PCA and emit the scree series")
    _add_data_flags(p)
    p.add_argument("--mi-prefilter", dest="mi_prefilter", type=int)
    p.add_argument("--threshold", dest="pca_variance_threshold", type=float)
    _add_config_flags(p)
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("mi-rank", help="rank features by mutual information")
    _add_data_flags(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_mi_rank)

    p = sub.add_parser("select", help="greedy wrapper feature selection")
    _add_data_flags(p)
    p.add_argument("--k-max", dest="wrapper_k_max", type=int)
    p.add_argument("--top-r", dest="wrapper_candidates", type=int)
    _add_config_flags(p, seed_required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("ngram", help="mine registry-operation n-grams per class")
    p.add_argument("--manifest", required=True)
    p.add_argument("--kind", dest="ngram_kind", choices=("create", "delete", "read", "write"))
    p.add_argument("--n", dest="ngram_sizes", type=int, nargs="+")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ngram)

    p = sub.add_parser("train", help="cross-validated training on the 80% split")
    _add_data_flags(p)
    p.add_argument("--classifier", choices=("svm", "forest"))
    p.add_argument("--kernel", choices=("linear", "rbf"))
    p.add_argument("--folds", dest="cv_folds", type=int)
    p.add_argument("--trees", dest="forest_trees", type=int)
    p.add_argument("--split-fraction", dest="split_fraction", type=float)
    p.add_argument("--selection", help="selection_summary.json restricting features")
    _add_config_flags(p, seed_required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a saved model bundle")
    _add_data_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--split", help="split.json from train")
    p.add_argument("--part", choices=("train", "test"), default="test")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    p.add_argument("--manifest", required=True)
    p.add_argument("--mode", choices=("static", "dynamic"))
    p.add_argument("--min-df", dest="min_df", type=int)
    p.add_argument("--mi-prefilter", dest="mi_prefilter", type=int)
    p.add_argument("--k-max", dest="wrapper_k_max", type=int)
    p.add_argument("--top-r", dest="wrapper_candidates", type=int)
    p.add_argument("--threshold", dest="pca_variance_threshold", type=float)
    p.add_argument("--classifier", choices=("svm", "forest"))
    p.add_argument("--kernel", choices=("linear", "rbf"))
    p.add_argument("--folds", dest="cv_folds", type=int)
    p.add_argument("--trees", dest="forest_trees", type=int)
    p.add_argument("--split-fraction", dest="split_fraction", type=float)
    p.add_argument("--kind", dest="ngram_kind", choices=("create", "delete", "read", "write"))
    p.add_argument("--n", dest="ngram_sizes", type=int, nargs="+")
    _add_config_flags(p, seed_required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RansomkitError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
