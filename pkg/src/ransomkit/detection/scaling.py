"""Feature standardization fitted on the training split.

Raw PE magnitudes span many orders of magnitude (ImageBase vs version
numbers), which makes RBF kernels useless; static features are therefore
standardized before SVM training. Binary presence features are left alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray  # zero-variance columns get std 1 so they map to 0

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        std = X.std(axis=0)
        std[std == 0] = 1.0
        return cls(mean=X.mean(axis=0), std=std)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "Standardizer":
        return cls(mean=np.array(payload["mean"]), std=np.array(payload["std"]))
