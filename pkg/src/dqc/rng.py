"""Deterministic seed derivation for nested stochastic components.

Every random step in the package draws from a generator keyed by a root seed
plus an integer path (stream tag, grid index, replication index, ...).  Child
streams are therefore independent of evaluation order, which lets replications
or grid points run in parallel while staying bit-reproducible.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def child_seed(root: int, *path: int) -> np.random.SeedSequence:
    """Seed sequence for the child stream identified by ``(root, *path)``."""
    entropy = [int(x) & _MASK64 for x in (root, *path)]
    return np.random.SeedSequence(entropy)


def child_rng(root: int, *path: int) -> np.random.Generator:
    """Generator seeded from :func:`child_seed`."""
    return np.random.default_rng(child_seed(root, *path))
