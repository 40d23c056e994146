"""Side-by-side Gaussianization comparison of the transform families."""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import data
from .stats import GaussianRef, moments, wasserstein1_to_gaussian
from .transforms import BOX_COX, YEO_JOHNSON, TransformSpec, apply_all, fit_lambda


@dataclass(frozen=True)
class ComparisonRow:
    source: str
    transform: TransformSpec
    mean: float
    std_dev: float
    wasserstein: float
    is_min: bool = False


def candidate_transforms(xs):
    """None, Tukey(0.5), fitted Box-Cox, fitted Yeo-Johnson and Log-Tukey, in that order."""
    return [
        TransformSpec.identity(),
        TransformSpec.tukey(0.5),
        TransformSpec.box_cox(fit_lambda(xs, BOX_COX)),
        TransformSpec.yeo_johnson(fit_lambda(xs, YEO_JOHNSON)),
        TransformSpec.log_tukey(),
    ]


def compare_transforms(xs, source="data", transforms=None):
    """Mean, std and W1 distance to the moment-matched Gaussian for each transform.

    The row with the smallest distance is flagged ``is_min``.
    """
    transforms = transforms or candidate_transforms(xs)
    rows = []
    for spec in transforms:
        y = apply_all(spec, xs)
        m = moments(y)
        rows.append(ComparisonRow(source, spec, m.mean, m.std_dev,
                                  wasserstein1_to_gaussian(y, GaussianRef(m.mean, m.std_dev))))
    best = min(range(len(rows)), key=lambda i: rows[i].wasserstein)
    rows[best] = replace(rows[best], is_min=True)
    return rows


def default_sources(n=10_000, seed=42):
    """The three benchmark samples: Uniform(0, 1), Exponential(mean 0.5), Iris sepal length."""
    return [
        ("Uni(0,1)", data.generate(data.Uniform(0.0, 1.0, n, seed))),
        ("Exp(0.5)", data.generate(data.Exponential(0.5, n, seed))),
        ("Iris feature 0", data.iris_feature(0)),
    ]
