"""Distributional measurements and multivariate Gaussian sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import (
    DegenerateInput,
    DomainError,
    EmptyInput,
    InvalidReference,
    MismatchedDimensions,
    SingularCovariance,
)

JITTER_START = 1e-6
JITTER_GROWTH = 10.0
JITTER_MAX = 1e-2


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    std_dev: float
    skewness: float
    n: int


@dataclass(frozen=True)
class GaussianRef:
    """A 1-D normal distribution ``Normal(mu, sigma**2)``."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)) or self.sigma <= 0:
            raise InvalidReference(f"reference needs finite mu and sigma > 0, got ({self.mu}, {self.sigma})")

    @classmethod
    def matching(cls, xs):
        """The normal distribution sharing the sample mean and standard deviation of ``xs``."""
        m = moments(xs)
        if m.std_dev == 0:
            raise DegenerateInput("constant data has no moment-matched Gaussian")
        return cls(m.mean, m.std_dev)

    def pdf(self, x):
        z = (np.asarray(x, dtype=np.float64) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True, eq=False)
class MultivariateGaussian:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(self.covariance, dtype=np.float64)
        d = mean.size
        if cov.shape != (d, d):
            raise MismatchedDimensions(f"covariance shape {cov.shape} does not match mean of length {d}")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(cov), initial=0.0)):
            raise ValueError("covariance is not symmetric")
        if np.any(np.diag(cov) < 0):
            raise ValueError("covariance has negative diagonal entries")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", (cov + cov.T) / 2.0)

    @property
    def dim(self):
        return self.mean.size


@dataclass(frozen=True, eq=False)
class DensityCurve:
    xs: np.ndarray
    densities: np.ndarray

    @property
    def mode(self):
        """Grid location of the highest density."""
        return float(self.xs[int(np.argmax(self.densities))])

    def integral(self):
        return float(np.trapezoid(self.densities, self.xs))

    def to_csv(self, path=None):
        """Two-column ``x,density`` CSV; returns the text and writes it when ``path`` is given."""
        lines = ["x,density"]
        lines += [f"{x:.6f},{p:.6f}" for x, p in zip(self.xs, self.densities)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", newline="") as f:
                f.write(text)
        return text


class MvgSample(NamedTuple):
    samples: np.ndarray
    jitter: float


def _as_1d(xs):
    x = np.asarray(xs, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInput("empty sample")
    return x


def moments(xs):
    """Mean, sample standard deviation (n-1) and adjusted Fisher-Pearson skewness."""
    x = _as_1d(xs)
    n = x.size
    mean = float(np.mean(x))
    if n == 1:
        return MomentSummary(mean, 0.0, 0.0, 1)
    dev = x - mean
    m2 = float(np.mean(dev**2))
    std = math.sqrt(m2 * n / (n - 1))
    if m2 == 0 or n < 3:
        skew = 0.0
    else:
        g1 = float(np.mean(dev**3)) / m2**1.5
        skew = g1 * math.sqrt(n * (n - 1)) / (n - 2)
    return MomentSummary(mean, std, skew, n)


def gaussian_quantile(p, ref=GaussianRef(0.0, 1.0)):
    """Inverse CDF of ``ref``; ``p`` may be a scalar or an array, all in (0, 1)."""
    q = np.asarray(p, dtype=np.float64)
    bad = ~((q > 0) & (q < 1))
    if bad.any():
        raise DomainError("gaussian_quantile", float(q.ravel()[np.flatnonzero(bad.ravel())[0]]),
                          message="probability must lie strictly inside (0, 1)")
    out = ref.mu + ref.sigma * special.ndtri(q)
    return float(out) if out.ndim == 0 else out


def wasserstein1_to_gaussian(xs, ref):
    """W1 distance between the empirical distribution of ``xs`` and ``ref``.

    Uses the quantile coupling: the i-th order statistic is matched with the
    reference quantile at ``(i - 0.5) / n``.
    """
    x = np.sort(_as_1d(xs))
    if not isinstance(ref, GaussianRef):
        ref = GaussianRef(*ref)
    n = x.size
    q = gaussian_quantile((np.arange(1, n + 1) - 0.5) / n, ref)
    return float(np.mean(np.abs(x - q)))


def wasserstein1_to_matched_gaussian(xs):
    return wasserstein1_to_gaussian(xs, GaussianRef.matching(xs))


def estimate_classwise_gaussian(rows):
    """Column means and sample covariance (n-1) of an ``n x d`` matrix; zero covariance when n == 1."""
    a = np.asarray(rows, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected an n x d matrix, got shape {a.shape}")
    n, d = a.shape
    if n == 0 or d == 0:
        raise EmptyInput("need at least one row and one column")
    mean = a.mean(axis=0)
    if n == 1:
        cov = np.zeros((d, d))
    else:
        dev = a - mean
        cov = dev.T @ dev / (n - 1)
    return MultivariateGaussian(mean, (cov + cov.T) / 2.0)


def sample_mvg(g, count, regularization, rng):
    """Draw ``count`` vectors from ``Normal(g.mean, g.covariance + regularization * I)``.

    If the Cholesky factorization fails, a diagonal jitter is added,
    starting at 1e-6 and growing tenfold up to 1e-2. Returns the samples and
    the jitter that was finally used (0.0 when none was needed).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if regularization < 0:
        raise ValueError(f"regularization must be >= 0, got {regularization}")
    d = g.dim
    base = g.covariance + regularization * np.eye(d)
    jitter = 0.0
    while True:
        try:
            chol = np.linalg.cholesky(base + jitter * np.eye(d) if jitter else base)
            break
        except np.linalg.LinAlgError:
            jitter = JITTER_START if jitter == 0 else jitter * JITTER_GROWTH
            if jitter > JITTER_MAX * (1 + 1e-9):
                raise SingularCovariance(
                    f"Cholesky factorization failed with jitter up to {JITTER_MAX:g}"
                ) from None
    z = rng.standard_normal((count, d))
    return MvgSample(g.mean + z @ chol.T, jitter)


def silverman_bandwidth(xs):
    x = _as_1d(xs)
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(std, (q75 - q25) / 1.34) if q75 > q25 else std
    return 0.9 * spread * x.size ** (-0.2)


def kde_curve(xs, grid_size=256):
    """Gaussian-kernel density estimate with Silverman's bandwidth.

    The grid spans ``[min - 3h, max + 3h]``. Densities are rescaled so the
    trapezoidal integral over the grid is exactly 1; for a grid that
    resolves the bandwidth the rescaling is negligible.
    """
    x = _as_1d(xs)
    if grid_size < 16:
        raise ValueError(f"grid_size must be >= 16, got {grid_size}")
    if np.all(x == x[0]):
        raise DegenerateInput("kernel density estimate needs at least two distinct values")
    # work on [0, 1]-scaled data so tiny or huge magnitudes neither underflow nor overflow
    lo, width = x.min(), x.max() - x.min()
    u = (x - lo) / width
    h = silverman_bandwidth(u)
    grid_u = np.linspace(-3 * h, 1 + 3 * h, grid_size)
    dens = np.zeros(grid_size)
    for chunk in np.array_split(u, max(1, u.size // 4096)):
        z = (grid_u[:, None] - chunk[None, :]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= np.trapezoid(dens, grid_u) * width
    return DensityCurve(lo + grid_u * width, dens)
