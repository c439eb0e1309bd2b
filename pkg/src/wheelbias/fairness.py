"""Chi-square goodness-of-fit test of wheel fairness.

The null hypothesis is a fair wheel: every pocket expected ``total / 37``
times. The critical value is computed from the regularized upper incomplete
gamma function ``Q(dof/2, x/2)`` inverted by bracketed bisection, so any
degrees of freedom and significance level are supported without table
lookups.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .errors import InsufficientDataError
from .frequency import EmpiricalDistribution
from .validation import N_POCKETS

# Below this per-pocket expectation the chi-square approximation degrades.
MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class ChiSquareReport:
    statistic: float
    dof: int
    alpha: float
    critical_value: float
    reject_null: bool

    def to_dict(self) -> dict:
        return asdict(self)


def chi_square_statistic(dist: EmpiricalDistribution) -> float:
    """Sum over pockets of (observed - expected)^2 / expected.

    Requires at least one expected occurrence per pocket (total >= 37); warns
    when the expectation drops below MIN_EXPECTED_COUNT.
    """
    total = int(dist.total)
    if total < N_POCKETS:
        raise InsufficientDataError(
            f"need at least {N_POCKETS} spins for one expected hit per pocket, got {total}"
        )
    expected = total / N_POCKETS
    if expected < MIN_EXPECTED_COUNT:
        warnings.warn(
            f"expected count per pocket is {expected:.2f} (< {MIN_EXPECTED_COUNT}); "
            "the chi-square approximation may be poor",
            UserWarning,
            stacklevel=2,
        )
    observed = dist.counts.astype(np.float64)
    return float(np.sum((observed - expected) ** 2) / expected)


def chi_square_critical(dof: int, alpha: float) -> float:
    """Upper-tail critical value of the chi-square distribution.

    Returns x such that Q(dof/2, x/2) = alpha, located by bisection to 1e-9
    relative tolerance.
    """
    dof = int(dof)
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")

    half = dof / 2.0
    lo, hi = 0.0, float(max(dof, 1))
    while special.gammaincc(half, hi / 2.0) > alpha:
        hi *= 2.0
    while hi - lo > 1e-9 * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if special.gammaincc(half, mid / 2.0) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_fairness(dist: EmpiricalDistribution, alpha: float = 0.05) -> ChiSquareReport:
    """Assemble the fairness test: reject the fair-wheel null when the
    statistic exceeds the critical value at ``alpha``."""
    statistic = chi_square_statistic(dist)
    dof = N_POCKETS - 1
    critical = chi_square_critical(dof, alpha)
    return ChiSquareReport(
        statistic=statistic,
        dof=dof,
        alpha=float(alpha),
        critical_value=critical,
        reject_null=statistic > critical,
    )
