"""Seeded synthetic roulette wheel: unbiased or with per-pocket bias.

Sampling is inverse-CDF over numpy's PCG64 generator, so a (pmf, seed, n)
triple produces the same spin stream on every platform and numpy release
covered by the PCG64 stream-compatibility guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import MassOverflowError
from .spins import SpinSeries
from .validation import N_POCKETS, check_pocket, check_probability

_MASS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WheelSpec:
    """A wheel's per-pocket probabilities plus the seed of its spin stream."""

    pmf: np.ndarray
    seed: int = 0
    label: str = ""

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=np.float64).copy()
        if pmf.shape != (N_POCKETS,):
            raise ValueError(f"pmf must have shape ({N_POCKETS},), got {pmf.shape}")
        if (pmf < 0.0).any():
            raise ValueError("pmf entries must be non-negative")
        if abs(float(pmf.sum()) - 1.0) > _MASS_TOL:
            raise ValueError(f"pmf must sum to 1, got {pmf.sum()!r}")
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)


def unbiased(seed: int = 0, label: str = "unbiased") -> WheelSpec:
    """A fair wheel: every pocket at probability 1/37."""
    return WheelSpec(pmf=np.full(N_POCKETS, 1.0 / N_POCKETS), seed=seed, label=label)


def biased(overrides: Mapping[int, float], seed: int = 0, label: str = "biased") -> WheelSpec:
    """A wheel with chosen pocket probabilities; the remaining mass is spread
    uniformly over the pockets not overridden."""
    fixed = {check_pocket(pocket): check_probability(p, f"pocket {pocket}") for pocket, p in overrides.items()}
    assigned = sum(fixed.values())
    if assigned > 1.0 + _MASS_TOL:
        raise MassOverflowError(f"overrides sum to {assigned} > 1")
    free = [pocket for pocket in range(N_POCKETS) if pocket not in fixed]
    if not free and abs(assigned - 1.0) > _MASS_TOL:
        raise ValueError(f"every pocket overridden but probabilities sum to {assigned}")

    pmf = np.zeros(N_POCKETS)
    for pocket, p in fixed.items():
        pmf[pocket] = p
    if free:
        pmf[free] = (1.0 - assigned) / len(free)
    return WheelSpec(pmf=pmf, seed=seed, label=label)


def spin(spec: WheelSpec, n: int) -> SpinSeries:
    """Draw ``n`` independent outcomes; deterministic per (spec, seed, n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    uniforms = rng.random(n)
    cdf = np.cumsum(spec.pmf)
    outcomes = np.searchsorted(cdf, uniforms, side="right")
    # cumsum round-off can leave cdf[-1] a hair under 1.0
    np.minimum(outcomes, N_POCKETS - 1, out=outcomes)
    return SpinSeries(outcomes, source_label=spec.label)
