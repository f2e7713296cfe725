"""Unit-norm projection directions.

Provides uniform sampling on the unit sphere, the best separating direction
for a pair of location-shifted populations, its estimate from labeled data,
and perturbed sampling concentrated around a given direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset
from .quantiles import check_level

UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class DirectionSet:
    """A bundle of S unit-norm direction vectors in R^p.

    ``level_index`` optionally maps each direction to the quantile level it is
    associated with (an index into some external grid of levels).
    """

    vectors: np.ndarray
    level_index: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise ValueError(f"directions must form a nonempty 2-d matrix, got shape {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            worst = float(np.abs(norms - 1.0).max())
            raise ValueError(f"directions must have unit norm within {UNIT_NORM_TOL}, worst deviation {worst:g}")
        object.__setattr__(self, "vectors", v)
        if self.level_index is not None:
            idx = np.asarray(self.level_index, dtype=int)
            if idx.shape != (v.shape[0],):
                raise ValueError("level_index must align with the direction rows")
            object.__setattr__(self, "level_index", idx)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _normalize_rows(m: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """Normalize rows to unit norm, redrawing any (measure-zero) null row."""
    norms = np.linalg.norm(m, axis=1)
    if rng is not None:
        while np.any(norms == 0.0):
            bad = norms == 0.0
            m[bad] = rng.standard_normal((int(bad.sum()), m.shape[1]))
            norms = np.linalg.norm(m, axis=1)
    elif np.any(norms == 0.0):
        raise ValueError("cannot normalize a zero vector")
    return m / norms[:, None]


def sample_uniform_sphere(p: int, s: int, seed) -> DirectionSet:
    """Draw ``s`` directions uniformly on the unit sphere in R^p.

    Each direction is a normalized vector of ``p`` independent standard normal
    draws.  Deterministic given ``seed``.
    """
    if p < 1 or s < 1:
        raise ValueError("dimension and direction count must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((s, p))
    return DirectionSet(_normalize_rows(g, rng))


def optimal_direction(mu1, mu2) -> np.ndarray:
    """Unit vector along ``mu2 - mu1``.

    For two populations that differ only by a location shift, projecting onto
    this direction maximally separates their directional quantiles, which makes
    it the error-minimizing projection axis at any fixed quantile level.
    """
    d = np.asarray(mu2, dtype=float) - np.asarray(mu1, dtype=float)
    nrm = np.linalg.norm(d)
    if nrm <= UNIT_NORM_TOL:
        raise ValueError("degenerate location difference")
    return d / nrm


def estimate_optimal_direction(data: LabeledDataset, k1: int, k2: int, theta) -> np.ndarray:
    """Estimate the best separating direction for classes ``k1`` vs ``k2``.

    Componentwise empirical ``theta``-quantiles of each class estimate the
    class locations under a location-shift model whose noise has zero
    componentwise ``theta``-quantile; the direction is then the normalized
    difference of the two estimated location vectors (class ``k2`` minus
    class ``k1``).
    """
    t = check_level(theta)
    q1 = np.quantile(data.class_matrix(k1), t, axis=0)
    q2 = np.quantile(data.class_matrix(k2), t, axis=0)
    return optimal_direction(q1, q2)


def sample_around(center, s: int, spread: float, seed) -> DirectionSet:
    """Draw ``s`` directions concentrated around ``center``.

    Direction i is ``normalize(center + spread * g_i)`` with ``g_i`` a standard
    normal vector, so ``spread = 0`` returns ``s`` exact copies of ``center``
    and large spreads approach uniform sphere sampling.  Deterministic given
    ``seed``.
    """
    if s < 1:
        raise ValueError("direction count must be positive")
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    c = np.asarray(center, dtype=float).ravel()
    c = _normalize_rows(c[None, :])[0]
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((s, c.size))
    return DirectionSet(_normalize_rows(c + spread * g, rng))
