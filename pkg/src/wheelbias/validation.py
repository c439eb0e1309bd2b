"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .errors import RangeError

N_POCKETS = 37  # European wheel: pockets 0-36


def as_outcome_array(data) -> np.ndarray:
    """Coerce spin outcomes to a validated 1-D int64 array of pocket ids.

    Accepts anything array-like, or an object exposing an ``outcomes``
    attribute (e.g. a SpinSeries). Raises RangeError on values outside 0-36
    and ValueError on non-integral input.
    """
    arr = np.asarray(getattr(data, "outcomes", data))
    if arr.ndim != 1:
        raise ValueError(f"outcomes must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        rounded = np.round(arr)
        if not np.array_equal(rounded, arr):
            raise ValueError("pocket ids must be integers")
        arr = rounded
    arr = arr.astype(np.int64, copy=False)
    if arr.size:
        bad = (arr < 0) | (arr >= N_POCKETS)
        if bad.any():
            raise RangeError(int(arr[bad][0]))
    return arr


def check_pocket(pocket: int) -> int:
    if not 0 <= int(pocket) < N_POCKETS:
        raise RangeError(int(pocket))
    return int(pocket)


def check_probability(value: float, name: str = "probability") -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_non_negative(value: float, name: str) -> float:
    value = float(value)
    if value < 0.0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value
