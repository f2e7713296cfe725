"""Exact error rates for quantile classification of two univariate populations.

Given a pair of continuous distributions (supplied as CDF / quantile-function
pairs) and class priors, the classifier that thresholds at the blend
``theta * Q_low(theta) + (1 - theta) * Q_high(theta)`` of the two class
quantiles has a correct-classification probability that can be written in
closed form from the CDFs alone.  This module evaluates that probability and
searches for the level that maximizes it; under a single-crossing condition
on the prior-weighted densities the maximum attains the Bayes rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError
from .quantiles import check_level

__all__ = [
    "UnivariateDistribution",
    "PopulationPair",
    "decision_threshold",
    "correct_classification_prob",
    "misclassification_prob",
    "optimal_level",
    "psi_curve",
    "from_scipy",
]

_GRID_SIZE = 199  # initial search grid: i/200 for i = 1..199
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class UnivariateDistribution:
    """A CDF and its quantile function, declared mutual inverses."""

    cdf: Callable[[float], float]
    quantile: Callable[[float], float]

    def check_inverse(self, levels=None, tol: float = 1e-9) -> None:
        """Probe ``cdf(quantile(t)) == t`` on a grid; raise if it fails.

        Meaningful for continuous, strictly increasing CDFs; empirical step
        functions will not satisfy it.
        """
        probe = np.linspace(0.01, 0.99, 25) if levels is None else np.asarray(levels, dtype=float)
        for t in probe:
            back = float(self.cdf(float(self.quantile(float(t)))))
            if not np.isfinite(back) or abs(back - t) > tol:
                raise ValueError(f"cdf and quantile are not mutual inverses at level {t:g} (got {back!r})")


def from_scipy(dist) -> UnivariateDistribution:
    """Wrap a frozen scipy.stats distribution."""
    return UnivariateDistribution(cdf=dist.cdf, quantile=dist.ppf)


@dataclass(frozen=True)
class PopulationPair:
    """Two univariate populations with prior probabilities summing to one."""

    dist_a: UnivariateDistribution
    dist_b: UnivariateDistribution
    priors: tuple = (0.5, 0.5)

    def __post_init__(self):
        pa, pb = (float(x) for x in self.priors)
        if pa < 0 or pb < 0 or abs(pa + pb - 1.0) > 1e-12:
            raise ValueError("priors must be nonnegative and sum to one")
        object.__setattr__(self, "priors", (pa, pb))

    def _ordered_at(self, theta: float):
        """Return (low dist, high dist, low prior, high prior) at this level."""
        qa = float(self.dist_a.quantile(theta))
        qb = float(self.dist_b.quantile(theta))
        if qa <= qb:
            return self.dist_a, self.dist_b, self.priors[0], self.priors[1], qa, qb
        return self.dist_b, self.dist_a, self.priors[1], self.priors[0], qb, qa


def decision_threshold(theta, pair: PopulationPair) -> float:
    """Classification cutoff ``theta * q_low + (1 - theta) * q_high``.

    ``q_low <= q_high`` are the two population quantiles at ``theta`` (the
    populations are ordered internally), so the cutoff always lies between
    them.
    """
    t = check_level(theta)
    *_, qa, qb = pair._ordered_at(t)
    return t * qa + (1.0 - t) * qb


def correct_classification_prob(theta, pair: PopulationPair) -> float:
    """Probability that thresholding at :func:`decision_threshold` is correct.

    Points below the cutoff are assigned to the population with the lower
    quantile, points above to the other, giving
    ``p_low * F_low(cut) + p_high * (1 - F_high(cut))``.
    """
    t = check_level(theta)
    low, high, p_low, p_high, qa, qb = pair._ordered_at(t)
    cut = t * qa + (1.0 - t) * qb
    return p_low * float(low.cdf(cut)) + p_high * (1.0 - float(high.cdf(cut)))


def misclassification_prob(theta, pair: PopulationPair) -> float:
    """Complement of :func:`correct_classification_prob` (exactly ``1 - psi``)."""
    return 1.0 - correct_classification_prob(theta, pair)


def _psi_checked(theta: float, pair: PopulationPair) -> float:
    v = correct_classification_prob(theta, pair)
    if not np.isfinite(v):
        raise NumericalError(f"correct-classification probability is not finite at level {theta:g}")
    return v


def optimal_level(pair: PopulationPair, tolerance: float = 1e-6):
    """Level maximizing the correct-classification probability.

    A 199-point grid scan locates the rough maximum, then golden-section
    search refines the bracket around it down to ``tolerance`` (width in
    theta).  Returns ``(theta_star, psi_star)``.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    grid = np.arange(1, _GRID_SIZE + 1) / (_GRID_SIZE + 1)
    values = np.array([_psi_checked(t, pair) for t in grid])
    i = int(np.argmax(values))
    best_theta, best_psi = float(grid[i]), float(values[i])
    step = 1.0 / (_GRID_SIZE + 1)
    lo = max(best_theta - step, step / 2)
    hi = min(best_theta + step, 1.0 - step / 2)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = _psi_checked(x1, pair), _psi_checked(x2, pair)
    while hi - lo > tolerance:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _psi_checked(x2, pair)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _psi_checked(x1, pair)
    for cand_t, cand_v in ((x1, f1), (x2, f2)):
        if cand_v > best_psi:
            best_theta, best_psi = float(cand_t), float(cand_v)
    return best_theta, best_psi


def psi_curve(pair: PopulationPair, levels=None) -> np.ndarray:
    """Two-column (theta, psi) table of the correct-classification probability."""
    if levels is None:
        levels = np.arange(1, _GRID_SIZE + 1) / (_GRID_SIZE + 1)
    thetas = np.asarray(levels, dtype=float).ravel()
    values = np.array([_psi_checked(check_level(t), pair) for t in thetas])
    return np.column_stack([thetas, values])
