"""Reference classifiers from the quantile-distance family.

- centroid: nearest class mean under Euclidean distance;
- median: smallest L1 distance to the componentwise class medians;
- cqc (componentwise quantile classifier): smallest summed asymmetric
  quantile loss against componentwise class quantiles, with the level chosen
  by minimizing the training (resubstitution) error over a grid.

At level 0.5 the componentwise quantile classifier coincides with the median
classifier, and both coincide with a directional quantile classifier that
uses the canonical basis directions with uniform weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset
from .quantiles import check_level, quantile_loss

__all__ = ["BaselineModel", "fit_centroid", "fit_median", "fit_cqc"]

BASELINE_KINDS = ("centroid", "median", "cqc")


@dataclass(frozen=True)
class BaselineModel:
    """Per-class parameter matrix plus the rule that consumes it."""

    kind: str
    centers: np.ndarray  # (K, p): class means, medians, or theta-quantiles
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in BASELINE_KINDS:
            raise ValueError(f"kind must be one of {BASELINE_KINDS}")
        c = np.asarray(self.centers, dtype=float)
        if c.ndim != 2 or c.shape[0] < 2:
            raise ValueError("centers must be a K x p matrix with K >= 2")
        if not np.all(np.isfinite(c)):
            raise ValueError("centers must be finite")
        object.__setattr__(self, "centers", c)
        if self.kind == "cqc":
            object.__setattr__(self, "theta", check_level(self.theta))
        elif self.theta is not None:
            raise ValueError(f"{self.kind} model carries no quantile level")

    @property
    def p(self) -> int:
        return self.centers.shape[1]

    @property
    def n_classes(self) -> int:
        return self.centers.shape[0]

    def _class_distances(self, pts: np.ndarray) -> np.ndarray:
        diff = pts[:, None, :] - self.centers[None, :, :]
        if self.kind == "centroid":
            return np.sqrt((diff**2).sum(axis=2))
        if self.kind == "median":
            return np.abs(diff).sum(axis=2)
        return quantile_loss(pts[:, None, :], self.centers[None, :, :], self.theta).sum(axis=2)

    def predict(self, y):
        """Label(s) of the nearest class; ties go to the smallest label."""
        arr = np.asarray(y, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        if pts.shape[1] != self.p:
            raise ValueError(f"dimension mismatch: model expects p={self.p}, got {pts.shape[1]}")
        d = self._class_distances(pts)
        labels = np.argmin(d, axis=1) + 1
        return int(labels[0]) if single else labels


def fit_centroid(data: LabeledDataset) -> BaselineModel:
    """Nearest class-mean classifier."""
    centers = np.stack([data.class_matrix(k).mean(axis=0) for k in range(1, data.n_classes + 1)])
    return BaselineModel("centroid", centers)


def fit_median(data: LabeledDataset) -> BaselineModel:
    """Componentwise median classifier (L1 distance to the class medians)."""
    centers = np.stack([np.median(data.class_matrix(k), axis=0) for k in range(1, data.n_classes + 1)])
    return BaselineModel("median", centers)


def _cqc_centers(data: LabeledDataset, theta: float) -> np.ndarray:
    return np.stack([np.quantile(data.class_matrix(k), theta, axis=0) for k in range(1, data.n_classes + 1)])


def fit_cqc(data: LabeledDataset, theta_grid) -> BaselineModel:
    """Componentwise quantile classifier with the level picked on the training set.

    Every level in the grid is scored by its resubstitution error; the
    error-minimizing level wins, ties preferring the level closest to 0.5 and
    then the smaller level.
    """
    grid = [check_level(t) for t in theta_grid]
    if not grid:
        raise ValueError("theta_grid must be nonempty")
    best = None
    for theta in grid:
        model = BaselineModel("cqc", _cqc_centers(data, theta), theta)
        err = float(np.mean(model.predict(data.X) != data.y))
        key = (err, abs(theta - 0.5), theta)
        if best is None or key < best[0]:
            best = (key, model)
    return best[1]
