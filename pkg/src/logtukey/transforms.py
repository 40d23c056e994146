"""Element-wise Gaussianizing transforms.

Every transform is described by a :class:`TransformSpec`, which is the one
place where the choice between the plain Tukey ladder, the Log-Tukey
transform and the fitted power transforms is made.

    >>> apply(TransformSpec.tukey(0.5), 4.0)
    2.0
    >>> round(apply(TransformSpec.log_tukey(), 1.0), 6)
    0.693197
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DomainError, EmptyInput

IDENTITY = "identity"
TUKEY = "tukey"
LOG = "log"
BOX_COX = "box_cox"
YEO_JOHNSON = "yeo_johnson"
LOG_TUKEY = "log_tukey"

KINDS = (IDENTITY, TUKEY, LOG, BOX_COX, YEO_JOHNSON, LOG_TUKEY)

DEFAULT_TUKEY_LAMBDA = 0.5
DEFAULT_EPSILON = 1e-4
LAMBDA_BOUNDS = (-5.0, 5.0)
LAMBDA_TOL = 1e-5

_DISPLAY = {
    IDENTITY: "None",
    TUKEY: "Tukey",
    LOG: "Log",
    BOX_COX: "Box-Cox",
    YEO_JOHNSON: "Yeo-Johnson",
    LOG_TUKEY: "Log-Tukey",
}

_ALIASES = {
    "none": IDENTITY,
    "identity": IDENTITY,
    "tukey": TUKEY,
    "log": LOG,
    "boxcox": BOX_COX,
    "box_cox": BOX_COX,
    "box-cox": BOX_COX,
    "yeojohnson": YEO_JOHNSON,
    "yeo_johnson": YEO_JOHNSON,
    "yeo-johnson": YEO_JOHNSON,
    "logtukey": LOG_TUKEY,
    "log_tukey": LOG_TUKEY,
    "log-tukey": LOG_TUKEY,
}


@dataclass(frozen=True)
class TransformSpec:
    """A transform family plus its parameter.

    ``param`` is the exponent for Tukey, Box-Cox and Yeo-Johnson, epsilon for
    Log-Tukey, and unused (``None``) for Identity and Log.
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind in (IDENTITY, LOG):
            if self.param is not None:
                raise ValueError(f"{self.kind} takes no parameter")
            return
        if self.param is None or not math.isfinite(self.param):
            raise ValueError(f"{self.kind} requires a finite parameter, got {self.param!r}")
        object.__setattr__(self, "param", float(self.param))
        if self.kind == LOG_TUKEY and self.param <= 0:
            raise ValueError(f"log_tukey epsilon must be > 0, got {self.param}")

    @classmethod
    def identity(cls):
        return cls(IDENTITY)

    @classmethod
    def tukey(cls, lmbda=DEFAULT_TUKEY_LAMBDA):
        return cls(TUKEY, lmbda)

    @classmethod
    def log(cls):
        return cls(LOG)

    @classmethod
    def box_cox(cls, lmbda):
        return cls(BOX_COX, lmbda)

    @classmethod
    def yeo_johnson(cls, lmbda):
        return cls(YEO_JOHNSON, lmbda)

    @classmethod
    def log_tukey(cls, epsilon=DEFAULT_EPSILON):
        return cls(LOG_TUKEY, epsilon)

    @classmethod
    def parse(cls, text):
        """Parse ``"name"`` or ``"name:param"``, e.g. ``"tukey:0.5"``, ``"logtukey"``.

        Box-Cox and Yeo-Johnson need an explicit exponent here; use
        :func:`fit_lambda` to obtain one from data.
        """
        name, _, value = text.strip().partition(":")
        kind = _ALIASES.get(name.strip().lower())
        if kind is None:
            raise ValueError(f"unknown transform {name!r}; choose from {sorted(set(_ALIASES))}")
        if kind in (IDENTITY, LOG):
            if value:
                raise ValueError(f"{name} takes no parameter")
            return cls(kind)
        if not value:
            if kind == TUKEY:
                return cls.tukey()
            if kind == LOG_TUKEY:
                return cls.log_tukey()
            raise ValueError(f"{name} needs an exponent, e.g. {name}:0.5")
        return cls(kind, float(value))

    @property
    def label(self):
        return _DISPLAY[self.kind]

    @property
    def requires_non_negative(self):
        return self.kind in (TUKEY, LOG, BOX_COX, LOG_TUKEY)

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}:{self.param:g}"


def _outside_domain(spec, x):
    """Boolean mask of entries outside the domain of ``spec``."""
    bad = ~np.isfinite(x)
    kind = spec.kind
    if kind == TUKEY:
        bad |= (x <= 0) if spec.param <= 0 else (x < 0)
    elif kind in (LOG, BOX_COX):
        bad |= x <= 0
    elif kind == LOG_TUKEY:
        bad |= x < 0
    return bad


def _box_cox(x, lmbda):
    logx = np.log(x)
    if lmbda == 0:
        return logx
    return np.expm1(lmbda * logx) / lmbda


def _yeo_johnson(x, lmbda):
    out = np.empty_like(x)
    pos = x >= 0
    xp = np.log1p(x[pos])
    xn = np.log1p(-x[~pos])
    out[pos] = xp if lmbda == 0 else np.expm1(lmbda * xp) / lmbda
    out[~pos] = -xn if lmbda == 2 else -np.expm1((2 - lmbda) * xn) / (2 - lmbda)
    return out


def _forward(spec, x):
    kind = spec.kind
    if kind == IDENTITY:
        return x.copy()
    if kind == TUKEY:
        lmbda = spec.param
        if lmbda == 0:
            return np.log(x)
        if lmbda == 0.5:
            return np.sqrt(x)
        # negative exponents reverse order, so flip sign to keep the ladder increasing
        return np.power(x, lmbda) if lmbda > 0 else -np.power(x, lmbda)
    if kind == LOG:
        return np.log(x)
    if kind == BOX_COX:
        return _box_cox(x, spec.param)
    if kind == YEO_JOHNSON:
        return _yeo_johnson(x, spec.param)
    return np.log(np.sqrt(x) + spec.param + 1.0)  # same sqrt as tukey(0.5), so the composition is exact


def apply_all(spec, xs):
    """Apply ``spec`` element-wise to an array-like of any shape.

    Raises :class:`DomainError` naming the first offending element (a flat
    index for 1-D input, an index tuple otherwise).
    """
    x = np.asarray(xs, dtype=np.float64)
    bad = _outside_domain(spec, x)
    if bad.any():
        flat = int(np.flatnonzero(bad.ravel())[0])
        index = flat if x.ndim <= 1 else tuple(int(i) for i in np.unravel_index(flat, x.shape))
        raise DomainError(spec.kind, float(x.ravel()[flat]), index)
    return _forward(spec, x)


def apply(spec, x):
    """Apply ``spec`` to a single real number."""
    x = float(x)
    if _outside_domain(spec, np.asarray(x)):
        raise DomainError(spec.kind, x)
    return float(_forward(spec, np.atleast_1d(x))[0])


def box_cox_llf(lmbda, xs):
    """Profile Gaussian log-likelihood of Box-Cox transformed data (Jacobian included)."""
    x = np.asarray(xs, dtype=np.float64)
    y = _box_cox(x, lmbda)
    var = np.var(y)
    if not var > 0:
        return -math.inf
    return -0.5 * x.size * math.log(var) + (lmbda - 1.0) * np.sum(np.log(x))


def yeo_johnson_llf(lmbda, xs):
    """Profile Gaussian log-likelihood of Yeo-Johnson transformed data (Jacobian included)."""
    x = np.asarray(xs, dtype=np.float64)
    y = _yeo_johnson(x, lmbda)
    var = np.var(y)
    if not var > 0:
        return -math.inf
    return -0.5 * x.size * math.log(var) + (lmbda - 1.0) * np.sum(np.sign(x) * np.log1p(np.abs(x)))


def golden_section_max(f, lo, hi, tol=LAMBDA_TOL):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns the midpoint of the final bracket."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def fit_lambda(xs, family, bounds=LAMBDA_BOUNDS):
    """Maximum-likelihood exponent for Box-Cox or Yeo-Johnson.

    ``family`` is ``"box_cox"`` or ``"yeo_johnson"`` (aliases accepted).
    The search is a golden-section search over ``bounds``.
    """
    kind = _ALIASES.get(str(family).lower(), family)
    if kind not in (BOX_COX, YEO_JOHNSON):
        raise ValueError(f"can only fit box_cox or yeo_johnson, not {family!r}")
    x = np.asarray(xs, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInput("cannot fit a transform exponent to empty data")
    probe = TransformSpec(kind, 1.0)
    bad = _outside_domain(probe, x)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(kind, float(x[i]), i)
    if np.all(x == x[0]):
        raise DegenerateInput("cannot fit a transform exponent to constant data")
    llf = box_cox_llf if kind == BOX_COX else yeo_johnson_llf
    return golden_section_max(lambda lm: llf(lm, x), *bounds)


def fit_transform(xs, family):
    """Convenience: fit the exponent and return ``(spec, transformed)``."""
    spec = TransformSpec(_ALIASES.get(str(family).lower(), family), fit_lambda(xs, family))
    return spec, apply_all(spec, xs)
