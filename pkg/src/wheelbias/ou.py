"""Mean-reverting (Ornstein-Uhlenbeck) model of a pocket's running
occurrence probability.

    dP(t) = -theta * (P(t) - mu) dt + sigma dW(t)

Simulation uses the exact discretization derived from the closed-form
solution, so there is no step-size bias:

    P[k+1] = mu + (P[k] - mu) * exp(-theta*dt)
             + sigma * sqrt((1 - exp(-2*theta*dt)) / (2*theta)) * Z[k]

Each path draws its normals from its own PCG64 substream (spawned by index
from the seed), so results do not depend on how many paths are simulated or
in which order. Paths are not clipped to [0, 1]; call
:func:`range_violations` to count excursions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .errors import InvalidParamsError, NonStationaryError
from .validation import check_positive

_PATH_CHUNK = 1024  # paths simulated per noise block, keeps memory flat


@dataclass(frozen=True)
class OuParams:
    """Mean-reversion rate, long-run mean, diffusion, and start value.

    ``theta`` and ``sigma`` are per unit time step; ``mu`` and ``p0`` live on
    the probability scale. ``theta == 0`` is the degenerate no-reversion
    limit.
    """

    theta: float
    mu: float
    sigma: float
    p0: float

    def __post_init__(self):
        if self.theta < 0.0:
            raise InvalidParamsError(f"theta must be >= 0, got {self.theta}")
        if self.sigma < 0.0:
            raise InvalidParamsError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 <= self.mu <= 1.0:
            raise InvalidParamsError(f"mu must lie in [0, 1], got {self.mu}")
        if not 0.0 <= self.p0 <= 1.0:
            raise InvalidParamsError(f"p0 must lie in [0, 1], got {self.p0}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class OuEnsemble:
    """Simulated paths, one row per path; column k holds step k+1 (time
    (k+1)*dt). The shared start value is params.p0, not stored."""

    paths: np.ndarray
    dt: float
    seed: int

    @property
    def n_paths(self) -> int:
        return int(self.paths.shape[0])

    @property
    def n_steps(self) -> int:
        return int(self.paths.shape[1])

    def step_values(self, step: int) -> np.ndarray:
        """Cross-section of all paths at 1-based step index."""
        if not 1 <= step <= self.n_steps:
            raise ValueError(f"step must lie in 1..{self.n_steps}, got {step}")
        return self.paths[:, step - 1]


def step_variance_factor(theta: float, dt: float) -> float:
    """(1 - exp(-2*theta*dt)) / (2*theta), continued by its limit dt at 0."""
    if theta == 0.0:
        return dt
    return -math.expm1(-2.0 * theta * dt) / (2.0 * theta)


def simulate(
    params: OuParams, n_steps: int, n_paths: int, dt: float = 1.0, seed: int = 0
) -> OuEnsemble:
    """Draw an ensemble of exact-discretization paths from ``params``."""
    if n_steps < 1 or n_paths < 1:
        raise ValueError("n_steps and n_paths must be >= 1")
    check_positive(dt, "dt")

    # pull = 1 - exp(-theta*dt), via expm1 so theta -> 0 degrades gracefully
    # to an exactly constant drift-free recursion
    pull = -math.expm1(-params.theta * dt)
    scale = params.sigma * math.sqrt(step_variance_factor(params.theta, dt))
    children = np.random.SeedSequence(seed).spawn(n_paths)

    paths = np.empty((n_paths, n_steps))
    for start in range(0, n_paths, _PATH_CHUNK):
        stop = min(start + _PATH_CHUNK, n_paths)
        noise = np.stack(
            [
                np.random.Generator(np.random.PCG64(child)).standard_normal(n_steps)
                for child in children[start:stop]
            ],
            axis=1,
        )  # shape (n_steps, chunk)
        state = np.full(stop - start, params.p0)
        block = paths[start:stop]
        for k in range(n_steps):
            state = state + (params.mu - state) * pull + scale * noise[k]
            block[:, k] = state
    paths.setflags(write=False)
    return OuEnsemble(paths=paths, dt=float(dt), seed=int(seed))


def moments(params: OuParams, t: float) -> tuple[float, float]:
    """Closed-form mean and variance of the process at time ``t``.

    mean = mu + (p0 - mu) * exp(-theta*t); the variance grows from 0 to the
    stationary sigma^2 / (2*theta).
    """
    t = float(t)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    mean = params.mu + (params.p0 - params.mu) * math.exp(-params.theta * t)
    variance = params.sigma**2 * step_variance_factor(params.theta, t)
    return mean, variance


def range_violations(ensemble: OuEnsemble) -> int:
    """Number of simulated values outside the probability range [0, 1]."""
    return int(np.count_nonzero((ensemble.paths < 0.0) | (ensemble.paths > 1.0)))


def calibrate(path, dt: float = 1.0, burn_in: int = 0) -> OuParams:
    """Fit parameters to an observed path by lag-1 least squares.

    Regressing P[k+1] on P[k] over the post-burn-in samples gives slope ``a``,
    intercept ``c``, and residual stdev ``s``; then

        theta = -ln(a) / dt
        mu    = c / (1 - a)
        sigma = s * sqrt(-2 ln(a) / (dt * (1 - a^2)))

    Raises NonStationaryError unless 0 < a < 1.
    """
    values = np.asarray(getattr(path, "path", path), dtype=np.float64)
    check_positive(dt, "dt")
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    sample = values[burn_in:]
    if sample.size < 30:
        raise ValueError(
            f"need at least 30 post-burn-in values to calibrate, got {sample.size}"
        )

    x, y = sample[:-1], sample[1:]
    x_mean, y_mean = x.mean(), y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    if sxx == 0.0:
        raise NonStationaryError("path is constant; the lag-1 slope is undefined")
    a = float(np.sum((x - x_mean) * (y - y_mean)) / sxx)
    if not 0.0 < a < 1.0:
        raise NonStationaryError(f"lag-1 slope {a:.6f} outside (0, 1)")
    c = y_mean - a * x_mean

    residuals = y - (a * x + c)
    s = math.sqrt(float(np.sum(residuals**2)) / (x.size - 2))
    theta = -math.log(a) / dt
    return OuParams(
        theta=theta,
        mu=c / (1.0 - a),
        sigma=s * math.sqrt(-2.0 * math.log(a) / (dt * (1.0 - a * a))),
        p0=float(sample[0]),
    )


class OrnsteinUhlenbeckModel(BaseEstimator):
    """Estimator facade over calibrate/simulate/moments.

    ``fit`` calibrates on a running-probability path; ``sample`` then draws
    seeded ensembles and ``predict`` evaluates the conditional mean at given
    times.
    """

    def __init__(self, dt: float = 1.0, burn_in: int = 0):
        self.dt = dt
        self.burn_in = burn_in

    def fit(self, X, y=None) -> "OrnsteinUhlenbeckModel":
        """Calibrate to a path of observed values."""
        self.params_ = calibrate(X, dt=self.dt, burn_in=self.burn_in)
        self.theta_ = self.params_.theta
        self.mu_ = self.params_.mu
        self.sigma_ = self.params_.sigma
        self.p0_ = self.params_.p0
        return self

    def _fitted_params(self) -> OuParams:
        if not hasattr(self, "params_"):
            raise ValueError("model is not fitted; call fit() first")
        return self.params_

    def predict(self, T) -> np.ndarray:
        """Conditional mean of the process at each time in ``T``."""
        params = self._fitted_params()
        t = np.atleast_1d(np.asarray(T, dtype=np.float64))
        return params.mu + (params.p0 - params.mu) * np.exp(-params.theta * t)

    def sample(self, n_steps: int, n_paths: int = 1, seed: int = 0) -> OuEnsemble:
        """Simulate an ensemble from the fitted parameters."""
        return simulate(self._fitted_params(), n_steps, n_paths, dt=self.dt, seed=seed)
