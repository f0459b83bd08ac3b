"""Deterministic sampling helpers.

All randomized checks in this package draw from the counter-based Philox
bit generator keyed by a 64-bit seed, so identical (seed, sample-count)
configurations reproduce bit-identical streams across platforms and runs.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng", "SamplingError"]


class SamplingError(RuntimeError):
    """Raised when rejection sampling cannot find the requested points."""


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for the given 64-bit seed and worker stream."""
    key = np.uint64(seed) + (np.uint64(stream) << np.uint64(32))
    return np.random.Generator(np.random.Philox(key=int(key)))
