"""Reference implementations used only to check the package.

Each one follows a different computational route from the code under test.
"""

import math

import numpy as np
from scipy import stats as sps


def brute_moments(xs):
    """Mean, n-1 standard deviation and adjusted skewness with plain Python loops."""
    xs = [float(v) for v in xs]
    n = len(xs)
    mean = math.fsum(xs) / n
    if n == 1:
        return mean, 0.0, 0.0
    m2 = math.fsum((v - mean) ** 2 for v in xs) / n
    m3 = math.fsum((v - mean) ** 3 for v in xs) / n
    std = math.sqrt(m2 * n / (n - 1))
    if m2 == 0 or n < 3:
        return mean, std, 0.0
    return mean, std, m3 / m2**1.5 * math.sqrt(n * (n - 1)) / (n - 2)


def bisect_quantile(p, mu=0.0, sigma=1.0):
    """Normal quantile by bisection on erfc-based tail probabilities."""
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if p < 0.5:
            below = 0.5 * math.erfc(-mid / math.sqrt(2)) < p
        else:
            below = 0.5 * math.erfc(mid / math.sqrt(2)) > 1 - p
        if below:
            lo = mid
        else:
            hi = mid
    return mu + sigma * (lo + hi) / 2


def two_sample_w1(xs, mu, sigma, n_draws, seed):
    """Monte-Carlo W1: compare xs with a large independent normal sample."""
    ref = np.random.default_rng(seed).normal(mu, sigma, n_draws)
    return sps.wasserstein_distance(xs, ref)


def finite_difference(f, params, eps=1e-6):
    """Central differences of scalar f with respect to every entry of params (a flat array)."""
    grad = np.zeros_like(params)
    for i in range(params.size):
        up = params.copy()
        down = params.copy()
        up[i] += eps
        down[i] -= eps
        grad[i] = (f(up) - f(down)) / (2 * eps)
    return grad


def nearest_mean_accuracy(train_x, train_y, test_x, test_y):
    classes = np.unique(train_y)
    means = np.stack([train_x[train_y == c].mean(axis=0) for c in classes])
    d = ((test_x[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    return float(np.mean(classes[np.argmin(d, axis=1)] == test_y))
