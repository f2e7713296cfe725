"""Labeled numeric datasets.

Conventions used throughout the package:

- observations are stored as rows of an (n, p) float matrix;
- class labels are integers 1..K, every class occurring at least once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LabeledDataset:
    """An (n, p) observation matrix with integer class labels in 1..K."""

    X: np.ndarray
    y: np.ndarray
    n_classes: int = 0  # 0 means "infer from the largest label"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise ValueError(f"observations must form a nonempty 2-d matrix, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("observations contain missing or non-finite values")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError("labels must be a 1-d sequence aligned with the observation rows")
        if not np.issubdtype(y.dtype, np.integer):
            yf = np.asarray(y, dtype=float)
            if not np.all(yf == np.round(yf)):
                raise ValueError("labels must be integers")
            y = yf.astype(int)
        y = y.astype(int)
        k = int(self.n_classes) if self.n_classes else int(y.max())
        if k < 2:
            raise ValueError("at least two classes are required")
        if y.min() < 1 or y.max() > k:
            raise ValueError(f"labels must lie in 1..{k}")
        present = np.bincount(y, minlength=k + 1)[1:]
        if np.any(present == 0):
            missing = int(np.argmin(present)) + 1
            raise ValueError(f"class {missing} has no observations")
        if X.shape[0] < k:
            raise ValueError("need at least one observation per class")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "n_classes", k)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def class_matrix(self, label: int) -> np.ndarray:
        """Rows belonging to class ``label``."""
        if not 1 <= int(label) <= self.n_classes:
            raise ValueError(f"unknown class label {label}")
        return self.X[self.y == int(label)]

    def class_counts(self) -> np.ndarray:
        """Number of observations per class, indexed 0..K-1."""
        return np.bincount(self.y, minlength=self.n_classes + 1)[1:]
