"""Empirical pocket statistics: counts, PMF/CDF, and running-frequency paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BurnInTooLargeError, EmptySeriesError
from .validation import N_POCKETS, as_outcome_array, check_pocket


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Occurrence counts over the 37 pockets with the derived PMF and CDF."""

    counts: np.ndarray
    total: int
    pmf: np.ndarray
    cdf: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if counts.shape != (N_POCKETS,):
            raise ValueError(f"counts must have shape ({N_POCKETS},), got {counts.shape}")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        if int(counts.sum()) != int(self.total):
            raise ValueError("total does not match the sum of counts")
        if int(self.total) < 1:
            raise EmptySeriesError("distribution needs at least one spin")
        for name, arr in (("counts", counts), ("pmf", self.pmf), ("cdf", self.cdf)):
            frozen = np.asarray(arr, dtype=np.float64 if name != "counts" else np.int64).copy()
            frozen.setflags(write=False)
            object.__setattr__(self, name, frozen)

    @classmethod
    def from_counts(cls, counts) -> "EmpiricalDistribution":
        counts = np.asarray(counts, dtype=np.int64)
        total = int(counts.sum())
        if total < 1:
            raise EmptySeriesError("distribution needs at least one spin")
        pmf = counts / total
        return cls(counts=counts, total=total, pmf=pmf, cdf=np.cumsum(pmf))


def tally(series) -> EmpiricalDistribution:
    """Count occurrences per pocket and derive the empirical PMF and CDF."""
    outcomes = as_outcome_array(series)
    if outcomes.size == 0:
        raise EmptySeriesError("cannot tally an empty series")
    return EmpiricalDistribution.from_counts(np.bincount(outcomes, minlength=N_POCKETS))


@dataclass(frozen=True, eq=False)
class FrequencyPath:
    """Running relative frequency of one pocket after 1..n spins.

    ``mean`` and ``stdev`` are the arithmetic mean and population standard
    deviation of the path values.
    """

    pocket: int
    path: np.ndarray
    mean: float
    stdev: float

    def __post_init__(self):
        path = np.asarray(self.path, dtype=np.float64).copy()
        path.setflags(write=False)
        object.__setattr__(self, "path", path)

    def __len__(self) -> int:
        return int(self.path.size)


def frequency_path(series, pocket: int) -> FrequencyPath:
    """Running occurrence ratio of ``pocket`` over every prefix of the series."""
    outcomes = as_outcome_array(series)
    if outcomes.size == 0:
        raise EmptySeriesError("cannot build a path from an empty series")
    pocket = check_pocket(pocket)
    hits = np.cumsum(outcomes == pocket)
    path = hits / np.arange(1, outcomes.size + 1)
    return FrequencyPath(
        pocket=pocket,
        path=path,
        mean=float(path.mean()),
        stdev=float(path.std()),
    )


def rolling_stats(path, burn_in: int) -> tuple[float, float]:
    """Mean and population stdev of path values after dropping the first
    ``burn_in`` entries (the high-variance early prefixes)."""
    values = np.asarray(getattr(path, "path", path), dtype=np.float64)
    burn_in = int(burn_in)
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    if burn_in >= values.size:
        raise BurnInTooLargeError(
            f"burn_in {burn_in} leaves no values in a path of length {values.size}"
        )
    tail = values[burn_in:]
    return float(tail.mean()), float(tail.std())


DEFAULT_BURN_IN = 500


def pocket_report(series, burn_in: int = DEFAULT_BURN_IN) -> list[dict]:
    """Per-pocket summary records: count, probability, and stabilized
    running-frequency statistics. Shape of the ``analyze`` JSON report."""
    dist = tally(series)
    records = []
    for pocket in range(N_POCKETS):
        fp = frequency_path(series, pocket)
        mean, stdev = rolling_stats(fp, burn_in)
        records.append(
            {
                "pocket": pocket,
                "count": int(dist.counts[pocket]),
                "probability": float(dist.pmf[pocket]),
                "path_mean": mean,
                "path_stdev": stdev,
            }
        )
    return records
