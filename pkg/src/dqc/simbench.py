"""Scenario generators and the benchmark harness.

Three two-class scenarios, each generated per replication for both a training
and an equally sized test set:

1. heavy-tailed symmetric: multivariate Student's t (df degrees of freedom,
   scale I or a random correlation matrix); class 2 is location-shifted by
   ``shift`` in every coordinate.
2. common skewness: per-entry independent t draws (Gaussian core optionally
   correlated) mapped through ``x -> log|x|``; class 2 is then shifted by
   ``shift`` in every coordinate, so the populations differ by a pure
   location shift of a skewed noise distribution.
3. opposite skewness: as scenario 2, but class 1 uses ``log|x|`` while
   class 2 uses ``-log|x|`` (then the shift), so the class distributions
   differ in shape, not just location.

The harness fits any of {dqc, centroid, median, cqc} per replication,
records test misclassification rates, and reduces them by replication index
so parallel and serial runs produce identical reports.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, classifier
from .datasets import LabeledDataset
from .rng import child_seed

__all__ = [
    "ScenarioConfig",
    "BenchRow",
    "BenchmarkReport",
    "CLASSIFIER_NAMES",
    "random_correlation_matrix",
    "sample_mvt",
    "scenario_transform",
    "generate_scenario",
    "make_classifier",
    "run_benchmark",
    "loo_validate",
    "augment_noise",
]

CLASSIFIER_NAMES = ("dqc", "centroid", "median", "cqc")

# stream tags for seed derivation
_SIGMA_STREAM = 11
_REPLICATION_STREAM = 12
_FIT_SEED_STREAM = 13

_PSD_TOL = 1e-10


@dataclass(frozen=True)
class ScenarioConfig:
    """Simulation settings: scenario id, sizes, dependence, and seeds.

    ``n`` is the total sample size per dataset, split n/2 per class; ``df``
    must exceed 2 so the noise has finite variance.
    """

    scenario: int
    n: int
    p: int
    correlated: bool = False
    shift: float = 0.4
    df: float = 3.0
    replications: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in (1, 2, 3):
            raise ValueError("scenario must be 1, 2, or 3")
        if self.n < 4 or self.n % 2 != 0:
            raise ValueError("n must be even and at least 4")
        if self.p < 1:
            raise ValueError("p must be positive")
        if self.df <= 2:
            raise ValueError("df must exceed 2")
        if self.replications < 1:
            raise ValueError("replications must be positive")


def random_correlation_matrix(p: int, seed) -> np.ndarray:
    """Random correlation matrix, uniform over the positive-definite set.

    Partial-correlation vine construction (Joe 2006; Lewandowski, Kurowicka
    and Joe 2009): canonical partial correlations are drawn from symmetric
    Beta laws rescaled to (-1, 1) and telescoped into plain correlations.
    The result is symmetric with an exactly unit diagonal, positive definite,
    and has all off-diagonal entries strictly inside (-1, 1).
    """
    if p < 1:
        raise ValueError("p must be positive")
    if p == 1:
        return np.ones((1, 1))
    rng = np.random.default_rng(seed)
    partial = np.zeros((p, p))
    corr = np.eye(p)
    for k in range(p - 1):
        a = 1.0 + (p - 2 - k) / 2.0
        pk = 2.0 * rng.beta(a, a, size=p - k - 1) - 1.0
        partial[k, k + 1 :] = pk
        rho = pk.copy()
        for l in range(k - 1, -1, -1):
            rho = rho * np.sqrt((1.0 - partial[l, k] ** 2) * (1.0 - partial[l, k + 1 :] ** 2))
            rho += partial[l, k] * partial[l, k + 1 :]
        corr[k, k + 1 :] = rho
        corr[k + 1 :, k] = rho
    return corr


def _psd_factor(scale: np.ndarray) -> np.ndarray:
    """Lower-triangular-or-spectral factor L with L @ L.T == scale."""
    try:
        return np.linalg.cholesky(scale)
    except np.linalg.LinAlgError:
        eigval, eigvec = np.linalg.eigh(scale)
        if eigval.min() < -_PSD_TOL * max(1.0, eigval.max()):
            raise ValueError("scale matrix is not positive semidefinite") from None
        return eigvec * np.sqrt(np.maximum(eigval, 0.0))


def _mvt_rows(m: int, p: int, factor: np.ndarray | None, df: float, shift, rng) -> np.ndarray:
    """Multivariate t rows: one chi-square mixing draw shared per row."""
    g = rng.standard_normal((m, p))
    if factor is not None:
        g = g @ factor.T
    c = rng.chisquare(df, size=m)
    return np.asarray(shift, dtype=float) + g / np.sqrt(c / df)[:, None]


def sample_mvt(m: int, scale, df: float, shift, seed) -> np.ndarray:
    """Draw ``m`` rows from a multivariate Student's t distribution.

    Rows are ``shift + L g / sqrt(c / df)`` with ``L`` a factor of ``scale``,
    ``g`` standard normal, and ``c`` an independent chi-square(df) draw per
    row.  Deterministic given ``seed``; a non-PSD scale matrix is rejected.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if df <= 0:
        raise ValueError("df must be positive")
    scale = np.asarray(scale, dtype=float)
    if scale.ndim != 2 or scale.shape[0] != scale.shape[1]:
        raise ValueError("scale must be a square matrix")
    factor = _psd_factor(scale)
    rng = np.random.default_rng(seed)
    shift_vec = np.broadcast_to(np.asarray(shift, dtype=float), (scale.shape[0],))
    return _mvt_rows(m, scale.shape[0], factor, df, shift_vec, rng)


def scenario_transform(scenario: int, class_label: int, values):
    """Elementwise transform applied to raw draws in scenarios 2 and 3.

    Scenario 1 is the identity; scenario 2 maps every value through
    ``log|x|``; scenario 3 maps class 1 through ``log|x|`` and class 2 through
    ``-log|x|``.  Values must be nonzero for the log scenarios.
    """
    v = np.asarray(values, dtype=float)
    if scenario == 1:
        return v
    if scenario == 2:
        return np.log(np.abs(v))
    if scenario == 3:
        out = np.log(np.abs(v))
        return -out if class_label == 2 else out
    raise ValueError("scenario must be 1, 2, or 3")


def _independent_t_rows(m: int, p: int, factor: np.ndarray | None, df: float, rng) -> np.ndarray:
    """t-margin rows with an independent chi-square mixing draw per entry."""
    g = rng.standard_normal((m, p))
    if factor is not None:
        g = g @ factor.T
    c = rng.chisquare(df, size=(m, p))
    return g / np.sqrt(c / df)


def _resample_zero_entries(x: np.ndarray, df: float, rng) -> np.ndarray:
    # exact zeros would be mapped to -inf by log|x|; probability-zero event
    while True:
        mask = x == 0.0
        hits = int(mask.sum())
        if hits == 0:
            return x
        x[mask] = rng.standard_normal(hits) / np.sqrt(rng.chisquare(df, hits) / df)


def _draw_dataset(config: ScenarioConfig, factor: np.ndarray | None, rng) -> LabeledDataset:
    m = config.n // 2
    if config.scenario == 1:
        a = _mvt_rows(m, config.p, factor, config.df, np.zeros(config.p), rng)
        b = _mvt_rows(m, config.p, factor, config.df, np.full(config.p, config.shift), rng)
    else:
        a = _resample_zero_entries(_independent_t_rows(m, config.p, factor, config.df, rng), config.df, rng)
        b = _resample_zero_entries(_independent_t_rows(m, config.p, factor, config.df, rng), config.df, rng)
        a = scenario_transform(config.scenario, 1, a)
        b = scenario_transform(config.scenario, 2, b) + config.shift
    X = np.vstack([a, b])
    y = np.concatenate([np.ones(m, dtype=int), np.full(m, 2, dtype=int)])
    return LabeledDataset(X, y, 2)


def generate_scenario(config: ScenarioConfig, replication_index: int):
    """Generate one ``(train, test)`` replication of a scenario.

    Train and test sets are drawn identically and independently.  The shared
    scale matrix of the correlated case depends only on ``(config.seed,
    config.p)``, so all replications of a configuration see the same
    dependence structure; the per-replication stream is derived from
    ``(config.seed, replication_index)``.
    """
    factor = None
    if config.correlated:
        sigma = random_correlation_matrix(config.p, child_seed(config.seed, _SIGMA_STREAM, config.p))
        factor = _psd_factor(sigma)
    rng = np.random.default_rng(child_seed(config.seed, _REPLICATION_STREAM, replication_index))
    train = _draw_dataset(config, factor, rng)
    test = _draw_dataset(config, factor, rng)
    return train, test


def make_classifier(name: str, dqc_config: classifier.DqcConfig | None = None, theta_grid=None):
    """Return a ``dataset -> fitted model`` callable for a classifier name.

    ``theta_grid`` overrides the level grid of the componentwise quantile
    classifier; it defaults to the DQC grid so both tune over the same levels.
    """
    if name not in CLASSIFIER_NAMES:
        raise ValueError(f"unknown classifier {name!r}; expected one of {CLASSIFIER_NAMES}")
    if name == "dqc":
        cfg = dqc_config or classifier.DqcConfig()
        return lambda data: classifier.fit(data, cfg)
    if name == "centroid":
        return baselines.fit_centroid
    if name == "median":
        return baselines.fit_median
    grid = theta_grid or (dqc_config.theta_grid if dqc_config else classifier.DEFAULT_THETA_GRID)
    return lambda data: baselines.fit_cqc(data, grid)


@dataclass(frozen=True)
class BenchRow:
    """One (classifier, replication) outcome."""

    classifier: str
    replication: int
    error: float
    seconds: float
    status: str = "ok"
    message: str = ""


@dataclass(frozen=True)
class BenchmarkReport:
    """All replication outcomes for one scenario configuration."""

    scenario: ScenarioConfig
    dqc_config: classifier.DqcConfig
    classifiers: tuple
    rows: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        object.__setattr__(self, "rows", tuple(self.rows))

    def errors(self, name: str) -> np.ndarray:
        """Error rates of the successful replications of one classifier."""
        return np.array([r.error for r in self.rows if r.classifier == name and r.status == "ok"])

    def summary(self) -> dict:
        """Per-classifier (mean error, standard error of the mean, #ok)."""
        out = {}
        for name in self.classifiers:
            e = self.errors(name)
            if e.size == 0:
                out[name] = (float("nan"), float("nan"), 0)
            else:
                sem = float(e.std(ddof=1) / np.sqrt(e.size)) if e.size > 1 else 0.0
                out[name] = (float(e.mean()), sem, int(e.size))
        return out


def _fit_seed_for(config: ScenarioConfig, base: classifier.DqcConfig, rep: int) -> classifier.DqcConfig:
    seed = int(child_seed(config.seed, _FIT_SEED_STREAM, rep).generate_state(1)[0])
    return replace(base, seed=seed)


def _run_replication(config: ScenarioConfig, rep: int, names, dqc_config) -> list:
    rows = []
    try:
        train, test = generate_scenario(config, rep)
    except Exception as exc:  # a broken generator invalidates the whole replication
        return [BenchRow(n, rep, float("nan"), 0.0, "failed", f"{type(exc).__name__}: {exc}") for n in names]
    for name in names:
        start = time.perf_counter()
        try:
            fit_fn = make_classifier(name, _fit_seed_for(config, dqc_config, rep) if name == "dqc" else dqc_config)
            model = fit_fn(train)
            err = float(np.mean(model.predict(test.X) != test.y))
            rows.append(BenchRow(name, rep, err, time.perf_counter() - start))
        except Exception as exc:
            rows.append(BenchRow(name, rep, float("nan"), time.perf_counter() - start, "failed", f"{type(exc).__name__}: {exc}"))
            break  # abort the rest of this replication
    return rows


def run_benchmark(
    config: ScenarioConfig,
    classifiers=CLASSIFIER_NAMES,
    dqc_config: classifier.DqcConfig | None = None,
    workers: int = 1,
) -> BenchmarkReport:
    """Fit and score every requested classifier on every replication.

    Replications are independent and may run in parallel (``workers > 1``);
    rows are always reduced in replication order, so the report does not
    depend on the worker count.
    """
    names = []
    for name in classifiers:
        if name not in CLASSIFIER_NAMES:
            raise ValueError(f"unknown classifier {name!r}; expected one of {CLASSIFIER_NAMES}")
        if name not in names:
            names.append(name)
    if not names:
        raise ValueError("at least one classifier is required")
    dqc_config = dqc_config or classifier.DqcConfig()
    reps = range(config.replications)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_replication, [config] * config.replications, reps, [names] * config.replications, [dqc_config] * config.replications))
    else:
        chunks = [_run_replication(config, rep, names, dqc_config) for rep in reps]
    rows = [row for chunk in chunks for row in chunk]
    return BenchmarkReport(config, dqc_config, tuple(names), tuple(rows))


def loo_validate(data: LabeledDataset, fit_fn) -> float:
    """Leave-one-out misclassification rate of ``fit_fn`` on ``data``.

    Each observation is predicted by a model fitted on the remaining n - 1.
    If removing an observation would leave its class empty, that observation
    counts as an automatic miss.
    """
    if data.n < 2:
        raise ValueError("need at least two observations")
    counts = data.class_counts()
    keep = np.ones(data.n, dtype=bool)
    miss = 0
    for i in range(data.n):
        if counts[data.y[i] - 1] == 1:
            miss += 1
            continue
        keep[i] = False
        rest = LabeledDataset(data.X[keep], data.y[keep], data.n_classes)
        keep[i] = True
        model = fit_fn(rest)
        miss += int(model.predict(data.X[i]) != data.y[i])
    return miss / data.n


def augment_noise(data: LabeledDataset, extra: int, seed) -> LabeledDataset:
    """Append ``extra`` columns of independent standard normal noise features."""
    if extra < 1:
        raise ValueError("extra must be positive")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((data.n, extra))
    return LabeledDataset(np.hstack([data.X, noise]), data.y.copy(), data.n_classes)
