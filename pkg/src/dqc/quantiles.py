"""Empirical quantiles and the asymmetric (check-function) quantile loss."""

from __future__ import annotations

import numpy as np

__all__ = ["check_level", "empirical_quantile", "quantile_loss", "loss_gap"]


def check_level(theta) -> float:
    """Return ``theta`` as a float after checking it lies strictly inside (0, 1).

    Boundary values are rejected rather than clamped so the loss coefficients
    ``theta`` and ``1 - theta`` stay strictly positive.
    """
    try:
        t = float(theta)
    except (TypeError, ValueError):
        raise ValueError(f"quantile level must be a number in (0, 1), got {theta!r}") from None
    if not np.isfinite(t) or t <= 0.0 or t >= 1.0:
        raise ValueError(f"quantile level must lie strictly inside (0, 1), got {theta!r}")
    return t


def empirical_quantile(sample, theta) -> float:
    """Linearly interpolated sample quantile at level ``theta``.

    Uses the order-statistic rule q = x_(k) + (h - k) * (x_(k+1) - x_(k)) with
    h = (n - 1) * theta + 1 and k = floor(h) (1-based order statistics), i.e.
    the common linear-interpolation definition.  The estimate is continuous in
    ``theta`` and always lies inside [min(sample), max(sample)].  ``sample``
    need not be pre-sorted; duplicates are kept.
    """
    t = check_level(theta)
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    return float(np.quantile(x, t))


def quantile_loss(z, q, theta):
    """Asymmetric quantile loss of observation ``z`` against quantile ``q``.

    Equals ``theta * max(z - q, 0) + (1 - theta) * max(q - z, 0)``: excess above
    the quantile is charged at rate ``theta``, deficit below at ``1 - theta``.
    Zero iff ``z == q``.  Inputs broadcast; ``theta`` may be an array of levels.
    """
    e = np.asarray(z, dtype=float) - np.asarray(q, dtype=float)
    t = np.asarray(theta, dtype=float)
    out = np.where(e >= 0.0, t * e, (t - 1.0) * e)
    return float(out) if out.ndim == 0 else out


def loss_gap(z, q1, q2, theta):
    """Loss against ``q2`` minus loss against ``q1`` at the same level.

    For ``q1 <= q2`` the gap never exceeds ``q2 - q1``, whatever ``z`` is: below
    both quantiles it equals ``(1 - theta) * (q2 - q1)``, above both it equals
    ``-theta * (q2 - q1)``, and in between it interpolates with slope -1.
    """
    return quantile_loss(z, q2, theta) - quantile_loss(z, q1, theta)
