"""The directional quantile classifier (DQC).

Training projects the data onto a set of unit-norm directions, computes
per-class empirical quantiles of the projections at a quantile level, and
weights the directions by how well they separate the classes on the training
sample.  The level itself is selected from a grid by stratified k-fold
cross-validation.  A new point is scored per class by the weighted sum of
asymmetric quantile losses of its projections against the stored class
quantiles, and assigned to the class with the smallest score.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .datasets import LabeledDataset
from .directions import DirectionSet, estimate_optimal_direction, sample_uniform_sphere, _normalize_rows
from .quantiles import check_level, quantile_loss
from .rng import child_rng, child_seed

__all__ = [
    "DEFAULT_THETA_GRID",
    "DqcConfig",
    "TrainedDQC",
    "directional_class_quantiles",
    "direction_discrepancies",
    "solve_weights",
    "fit",
    "fit_with_directions",
]

DEFAULT_THETA_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))

DIRECTION_MODES = ("uniform", "optimal-perturbed")

# stream tags for seed derivation
_FOLD_STREAM = 1
_DIRECTION_STREAM = 2

_WEIGHT_NORM_TOL = 1e-9
_PRIOR_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DqcConfig:
    """Training configuration.

    ``directions_per_theta = None`` resolves to ``max(n, p)`` at fit time.
    ``direction_mode`` is either ``"uniform"`` (directions drawn uniformly on
    the sphere) or ``"optimal-perturbed"`` (Gaussian perturbations of the
    estimated best separating direction(s), with standard deviation
    ``spread``; for more than two classes the per-level budget is spread
    round-robin over all pairwise separating directions).
    """

    theta_grid: tuple = DEFAULT_THETA_GRID
    directions_per_theta: int | None = None
    direction_mode: str = "optimal-perturbed"
    spread: float = 0.25
    cv_folds: int = 5
    seed: int = 0
    clip_nonnegative_weights: bool = False

    def __post_init__(self):
        grid = tuple(check_level(t) for t in self.theta_grid)
        if len(grid) == 0:
            raise ValueError("theta_grid must be nonempty")
        if len(set(grid)) != len(grid):
            raise ValueError("theta_grid values must be distinct")
        object.__setattr__(self, "theta_grid", grid)
        if self.directions_per_theta is not None and self.directions_per_theta < 1:
            raise ValueError("directions_per_theta must be positive")
        if self.direction_mode not in DIRECTION_MODES:
            raise ValueError(f"direction_mode must be one of {DIRECTION_MODES}")
        if self.spread < 0:
            raise ValueError("spread must be nonnegative")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be at least 2")


@dataclass(frozen=True)
class TrainedDQC:
    """A fitted directional quantile classifier.

    ``directions.level_index`` maps every direction to an entry of ``thetas``;
    ``class_quantiles[k, s]`` is the empirical quantile of class ``k + 1``
    projections onto direction ``s`` at that direction's level.
    """

    thetas: tuple
    directions: DirectionSet
    weights: np.ndarray
    class_quantiles: np.ndarray
    priors: np.ndarray
    config: DqcConfig | None = None
    cv_errors: tuple = field(default=())

    def __post_init__(self):
        thetas = tuple(check_level(t) for t in self.thetas)
        object.__setattr__(self, "thetas", thetas)
        if self.directions.level_index is None:
            raise ValueError("model directions need a level_index grouping")
        if self.directions.level_index.min() < 0 or self.directions.level_index.max() >= len(thetas):
            raise ValueError("level_index refers to a missing quantile level")
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.shape[0] != self.directions.count:
            raise ValueError("weights must align with the directions")
        if abs(np.linalg.norm(w) - 1.0) > _WEIGHT_NORM_TOL:
            raise ValueError("weights must have unit norm")
        q = np.asarray(self.class_quantiles, dtype=float)
        if q.ndim != 2 or q.shape[1] != self.directions.count:
            raise ValueError("class_quantiles must be a K x S matrix aligned with the directions")
        if not np.all(np.isfinite(q)):
            raise ValueError("class_quantiles must be finite")
        pr = np.asarray(self.priors, dtype=float).ravel()
        if pr.shape[0] != q.shape[0]:
            raise ValueError("priors must align with the classes")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > _PRIOR_SUM_TOL:
            raise ValueError("priors must be nonnegative and sum to one")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "class_quantiles", q)
        object.__setattr__(self, "priors", pr)
        object.__setattr__(self, "cv_errors", tuple(self.cv_errors))

    @property
    def p(self) -> int:
        return self.directions.dim

    @property
    def n_classes(self) -> int:
        return self.class_quantiles.shape[0]

    def _theta_per_direction(self) -> np.ndarray:
        return np.asarray(self.thetas, dtype=float)[self.directions.level_index]

    def scores(self, y) -> np.ndarray:
        """Per-class weighted loss totals; smaller means closer to the class.

        Accepts a single p-vector or an (m, p) matrix of query points.
        """
        arr = np.asarray(y, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        if pts.shape[1] != self.p:
            raise ValueError(f"dimension mismatch: model expects p={self.p}, got {pts.shape[1]}")
        proj = pts @ self.directions.vectors.T
        th = self._theta_per_direction()
        out = np.stack(
            [quantile_loss(proj, self.class_quantiles[k], th) @ self.weights for k in range(self.n_classes)],
            axis=1,
        )
        return out[0] if single else out

    def predict(self, y):
        """Label(s) with the smallest score; ties go to the smallest label."""
        s = self.scores(y)
        if s.ndim == 1:
            return int(np.argmin(s)) + 1
        return np.argmin(s, axis=1) + 1


def directional_class_quantiles(data: LabeledDataset, theta, dirs: DirectionSet) -> np.ndarray:
    """K x S matrix of per-class empirical quantiles of the projected data."""
    t = check_level(theta)
    if dirs.dim != data.p:
        raise ValueError(f"direction dimension {dirs.dim} does not match data dimension {data.p}")
    proj = data.X @ dirs.vectors.T
    return _class_quantiles(proj, data.y, data.n_classes, t)


def _class_quantiles(proj: np.ndarray, labels: np.ndarray, n_classes: int, theta: float) -> np.ndarray:
    rows = []
    for k in range(1, n_classes + 1):
        block = proj[labels == k]
        if block.shape[0] == 0:
            raise ValueError("empty class")
        rows.append(np.quantile(block, theta, axis=0))
    return np.stack(rows)


def direction_discrepancies(data: LabeledDataset, theta, dirs: DirectionSet, class_q: np.ndarray) -> np.ndarray:
    """Per-direction training total of own-class loss minus best other-class loss.

    Negative entries mark directions along which points sit closer (in
    asymmetric loss) to their own class quantile than to any other class's,
    i.e. directions that help classification.
    """
    t = check_level(theta)
    proj = data.X @ dirs.vectors.T
    return _discrepancies(proj, data.y, np.asarray(class_q, dtype=float), t)


def _discrepancies(proj: np.ndarray, labels: np.ndarray, class_q: np.ndarray, theta: float) -> np.ndarray:
    n = proj.shape[0]
    losses = np.stack([quantile_loss(proj, class_q[k], theta) for k in range(class_q.shape[0])])
    own = losses[labels - 1, np.arange(n), :]
    losses[labels - 1, np.arange(n), :] = np.inf
    best_other = losses.min(axis=0)
    return (own - best_other).sum(axis=0)


def solve_weights(discrepancies, clip: bool = False) -> np.ndarray:
    """Unit-norm weights minimizing the weighted discrepancy total.

    The objective ``w . d`` over unit vectors is minimized by ``-d / ||d||``,
    which assigns positive weight to helpful (negative-discrepancy)
    directions.  An all-zero input falls back to uniform weights.  With
    ``clip=True`` negative weights are zeroed and the vector renormalized
    (uniform fallback if everything was clipped).
    """
    d = np.asarray(discrepancies, dtype=float).ravel()
    if d.size == 0:
        raise ValueError("need at least one direction")
    uniform = np.full(d.size, 1.0 / np.sqrt(d.size))
    nrm = np.linalg.norm(d)
    w = -d / nrm if nrm > 0 else uniform
    if clip:
        w = np.maximum(w, 0.0)
        nrm = np.linalg.norm(w)
        w = w / nrm if nrm > 0 else uniform
    return w


def _fit_parameters(proj, labels, n_classes, theta, clip):
    q = _class_quantiles(proj, labels, n_classes, theta)
    d = _discrepancies(proj, labels, q, theta)
    return q, solve_weights(d, clip)


def _predict_from_projections(proj, class_q, theta, weights):
    scores = np.stack(
        [quantile_loss(proj, class_q[k], theta) @ weights for k in range(class_q.shape[0])],
        axis=1,
    )
    return np.argmin(scores, axis=1) + 1


def _stratified_folds(labels: np.ndarray, n_classes: int, folds: int, seed) -> np.ndarray:
    """Assign a fold id to every observation, round-robin within each class."""
    rng = np.random.default_rng(seed)
    fold_id = np.empty(labels.shape[0], dtype=int)
    for k in range(1, n_classes + 1):
        idx = np.flatnonzero(labels == k)
        perm = rng.permutation(idx)
        fold_id[perm] = np.arange(perm.size) % folds
    return fold_id


def _directions_for_level(data, theta, count, config, level_pos) -> DirectionSet:
    seed = child_seed(config.seed, _DIRECTION_STREAM, level_pos)
    if config.direction_mode == "uniform":
        return DirectionSet(sample_uniform_sphere(data.p, count, seed).vectors)
    pairs = list(itertools.combinations(range(1, data.n_classes + 1), 2))
    centers = np.stack([estimate_optimal_direction(data, a, b, theta) for a, b in pairs])
    assigned = centers[np.arange(count) % len(pairs)]
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, data.p))
    return DirectionSet(_normalize_rows(assigned + config.spread * g, rng))


def _cv_misclassification(data, theta, dirs, fold_id, config) -> float:
    proj = data.X @ dirs.vectors.T
    miss = 0
    for f in range(config.cv_folds):
        train = fold_id != f
        for k in range(1, data.n_classes + 1):
            if not np.any(data.y[train] == k):
                raise ValueError("fold degenerate: class absent")
        if not np.any(~train):
            continue
        q, w = _fit_parameters(proj[train], data.y[train], data.n_classes, theta, config.clip_nonnegative_weights)
        pred = _predict_from_projections(proj[~train], q, theta, w)
        miss += int(np.sum(pred != data.y[~train]))
    return miss / data.n


def fit_with_directions(
    data: LabeledDataset,
    theta,
    dirs: DirectionSet,
    weights=None,
    clip: bool = False,
) -> TrainedDQC:
    """Fit a single-level model with a fixed direction set.

    Weights default to the closed-form solution from the training
    discrepancies; pass explicit ``weights`` (e.g. uniform) to bypass the
    weight optimization.
    """
    t = check_level(theta)
    if dirs.dim != data.p:
        raise ValueError(f"direction dimension {dirs.dim} does not match data dimension {data.p}")
    proj = data.X @ dirs.vectors.T
    if weights is None:
        q, w = _fit_parameters(proj, data.y, data.n_classes, t, clip)
    else:
        q = _class_quantiles(proj, data.y, data.n_classes, t)
        w = np.asarray(weights, dtype=float).ravel()
    priors = data.class_counts() / data.n
    grouped = DirectionSet(dirs.vectors, np.zeros(dirs.count, dtype=int))
    return TrainedDQC((t,), grouped, w, q, priors)


def fit(data: LabeledDataset, config: DqcConfig | None = None) -> TrainedDQC:
    """Train a directional quantile classifier.

    For every level in ``config.theta_grid`` a direction set is built, the
    misclassification rate is estimated by stratified k-fold cross-validation,
    and the level with the smallest estimate is refitted on the full data
    (ties prefer the level closest to 0.5, then the smaller level).
    """
    config = config or DqcConfig()
    if config.cv_folds > data.n:
        raise ValueError("cv_folds cannot exceed the number of observations")
    count = config.directions_per_theta or max(data.n, data.p)
    fold_id = _stratified_folds(data.y, data.n_classes, config.cv_folds, child_seed(config.seed, _FOLD_STREAM))
    best = None
    cv_errors = []
    for r, theta in enumerate(config.theta_grid):
        dirs = _directions_for_level(data, theta, count, config, r)
        err = _cv_misclassification(data, theta, dirs, fold_id, config)
        cv_errors.append((theta, err))
        key = (err, abs(theta - 0.5), theta)
        if best is None or key < best[0]:
            best = (key, theta, dirs)
    _, theta_star, dirs_star = best
    model = fit_with_directions(data, theta_star, dirs_star, clip=config.clip_nonnegative_weights)
    return replace(model, config=config, cv_errors=tuple(cv_errors))
