"""Bundled reference data from a 5,000-spin live European-wheel session.

The per-pocket hit rates below were recorded over the session's in-sample
window (two-decimal percentages); the segmentation describes how the full
10,980-spin recording was divided into the in-sample block and seven
out-of-sample legs of varying length. They serve as the default bias profile
for simulations and as test fixtures.
"""

from __future__ import annotations

import numpy as np

from .frequency import EmpiricalDistribution
from .spins import SpinSeries

IN_SAMPLE_SPINS = 5000
OOS_SEGMENT_LENGTHS = (2479, 499, 501, 365, 492, 759, 885)
TOTAL_SPINS = IN_SAMPLE_SPINS + sum(OOS_SEGMENT_LENGTHS)

# Pocket 0 through 36, in percent of the in-sample spins.
_SESSION_RATE_PERCENT = (
    2.84, 2.76, 2.84, 2.64, 2.60, 2.44, 2.50, 2.90, 2.86, 3.22,
    2.90, 2.78, 2.44, 2.68, 2.76, 2.78, 2.36, 2.70, 2.32, 2.44,
    2.96, 2.56, 3.08, 2.86, 2.72, 2.86, 2.62, 2.66, 2.60, 2.98,
    2.86, 2.56, 2.70, 2.42, 2.48, 2.74, 2.58,
)

SESSION_POCKET_RATES = tuple(p / 100.0 for p in _SESSION_RATE_PERCENT)


def session_counts() -> np.ndarray:
    """Per-pocket occurrence counts implied by the session rates."""
    return np.rint(np.array(SESSION_POCKET_RATES) * IN_SAMPLE_SPINS).astype(np.int64)


def session_distribution() -> EmpiricalDistribution:
    """The in-sample empirical distribution of the reference session."""
    return EmpiricalDistribution.from_counts(session_counts())


def session_series(seed: int = 0) -> SpinSeries:
    """A 5,000-spin series with exactly the session's per-pocket counts.

    The chronological arrangement is a seeded shuffle; every arrangement
    yields the same tally.
    """
    outcomes = np.repeat(np.arange(37), session_counts())
    rng = np.random.Generator(np.random.PCG64(seed))
    rng.shuffle(outcomes)
    return SpinSeries(outcomes, source_label="session-5000")
