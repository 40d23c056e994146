"""Datasets: bundled Iris, seeded synthetic generators, and feature-file I/O.

Feature files are UTF-8 CSV with a header ``label,f0,...,f{d-1}`` and one
sample per row. Split manifests have one ``class_name,partition`` line per
class, where partition is ``base``, ``validation`` or ``novel``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._iris import IRIS_CSV
from .errors import InvalidSpec, ParseError, SplitError, ValidationError

PARTITIONS = ("base", "validation", "novel")


@dataclass(frozen=True, eq=False)
class FeatureDataset:
    """Labelled feature vectors with every class assigned to exactly one partition."""

    features: np.ndarray
    labels: np.ndarray
    split: dict
    non_negative: bool = False
    _rows: dict = field(init=False, repr=False)

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels).astype(str)
        if feats.ndim != 2:
            raise ValidationError(f"features must be a T x d matrix, got shape {feats.shape}")
        if labels.shape != (feats.shape[0],):
            raise ValidationError(f"{labels.size} labels for {feats.shape[0]} feature rows")
        bad = ~np.isfinite(feats)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise ValidationError(f"non-finite value at row {r + 1}, column f{c}", row=int(r) + 1, column=int(c))
        if self.non_negative and (feats < 0).any():
            r, c = np.argwhere(feats < 0)[0]
            raise ValidationError(f"negative value {feats[r, c]} at row {r + 1}, column f{c}",
                                  row=int(r) + 1, column=int(c))
        split = {str(k): v for k, v in self.split.items()}
        for name, part in split.items():
            if part not in PARTITIONS:
                raise SplitError(f"class {name!r} has unknown partition {part!r}")
        rows = {}
        for i, name in enumerate(labels):
            rows.setdefault(name, []).append(i)
        missing = [name for name in rows if name not in split]
        if missing:
            raise SplitError(f"class {missing[0]!r} is not assigned to any partition")
        split = {name: split[name] for name in rows}
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "split", split)
        object.__setattr__(self, "_rows", {k: np.array(v) for k, v in rows.items()})

    @property
    def dim(self):
        return self.features.shape[1]

    def __len__(self):
        return self.features.shape[0]

    def classes(self, partition=None):
        """Class names in order of first appearance, optionally restricted to one partition."""
        return [c for c in self._rows if partition is None or self.split[c] == partition]

    def rows_of(self, name):
        return self._rows[name]

    def class_counts(self):
        return {c: len(r) for c, r in self._rows.items()}


# ---------------------------------------------------------------------------
# synthetic generators


@dataclass(frozen=True)
class Uniform:
    a: float = 0.0
    b: float = 1.0
    n: int = 10_000
    seed: int = 42


@dataclass(frozen=True)
class Exponential:
    """Exponential distribution parameterized by its mean (also its std)."""

    mean: float = 0.5
    n: int = 10_000
    seed: int = 42


@dataclass(frozen=True)
class LogNormal:
    mu: float = 0.0
    sigma: float = 1.0
    n: int = 10_000
    seed: int = 42


@dataclass(frozen=True)
class GaussianMixtureClasses:
    """Per-class feature clouds for few-shot experiments.

    Class centres are ``exp(mean_scale * g)`` with ``g ~ N(0, I)``. With
    ``skew="lognormal"`` a row is its centre times ``exp(spread * z -
    spread**2 / 2)``, which is non-negative, positively skewed and has the
    centre as its mean. ``skew="none"`` adds ``spread * z`` instead.
    Classes are split into base / validation / novel in that order.
    """

    n_classes: int = 20
    dim: int = 64
    samples_per_class: int = 40
    mean_scale: float = 0.3
    spread: float = 0.8
    skew: str = "lognormal"
    n_base: int = 8
    n_validation: int = 2
    seed: int = 42


SyntheticSpec = Union[Uniform, Exponential, LogNormal, GaussianMixtureClasses]


def _check(cond, message):
    if not cond:
        raise InvalidSpec(message)


def generate(spec):
    """Draw data for ``spec``; a 1-D array, or a :class:`FeatureDataset` for class generators."""
    rng = np.random.default_rng(spec.seed)
    if isinstance(spec, GaussianMixtureClasses):
        return _mixture_dataset(spec, rng)
    _check(spec.n >= 1, f"sample count must be >= 1, got {spec.n}")
    if isinstance(spec, Uniform):
        _check(spec.b > spec.a, f"uniform needs b > a, got ({spec.a}, {spec.b})")
        return rng.uniform(spec.a, spec.b, spec.n)
    if isinstance(spec, Exponential):
        _check(spec.mean > 0, f"exponential mean must be > 0, got {spec.mean}")
        return rng.exponential(spec.mean, spec.n)
    if isinstance(spec, LogNormal):
        _check(spec.sigma > 0, f"log-normal sigma must be > 0, got {spec.sigma}")
        return rng.lognormal(spec.mu, spec.sigma, spec.n)
    raise InvalidSpec(f"unknown synthetic spec {spec!r}")


def _mixture_dataset(spec, rng):
    _check(spec.n_classes >= 1 and spec.dim >= 1 and spec.samples_per_class >= 1,
           "class count, dimension and samples per class must be >= 1")
    _check(spec.spread >= 0 and spec.mean_scale >= 0, "spread and mean_scale must be >= 0")
    _check(spec.skew in ("lognormal", "none"), f"unknown skew kind {spec.skew!r}")
    _check(0 <= spec.n_base and 0 <= spec.n_validation and spec.n_base + spec.n_validation <= spec.n_classes,
           "base + validation classes exceed the class count")
    centres = np.exp(spec.mean_scale * rng.standard_normal((spec.n_classes, spec.dim)))
    z = rng.standard_normal((spec.n_classes, spec.samples_per_class, spec.dim))
    if spec.skew == "lognormal":
        feats = centres[:, None, :] * np.exp(spec.spread * z - spec.spread**2 / 2)
    else:
        feats = centres[:, None, :] + spec.spread * z
    width = len(str(spec.n_classes - 1))
    names = [f"c{i:0{width}d}" for i in range(spec.n_classes)]
    split = {}
    for i, name in enumerate(names):
        if i < spec.n_base:
            split[name] = "base"
        elif i < spec.n_base + spec.n_validation:
            split[name] = "validation"
        else:
            split[name] = "novel"
    labels = np.repeat(names, spec.samples_per_class)
    return FeatureDataset(feats.reshape(-1, spec.dim), labels, split,
                          non_negative=spec.skew == "lognormal")


# ---------------------------------------------------------------------------
# Iris


def iris():
    """The 150 x 4 Iris measurement matrix."""
    return np.loadtxt(io.StringIO(IRIS_CSV), delimiter=",")


def iris_feature(index):
    if not 0 <= index < 4:
        raise IndexError(f"Iris has features 0..3, not {index}")
    return iris()[:, index]


# ---------------------------------------------------------------------------
# feature files


def _read_split(path):
    split = {}
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 'class_name,partition', got {len(row)} fields", line=lineno)
            name, part = row[0].strip(), row[1].strip()
            if part not in PARTITIONS:
                raise ParseError(f"unknown partition {part!r}", line=lineno, column=2)
            if split.get(name, part) != part:
                raise SplitError(f"class {name!r} is assigned to both {split[name]!r} and {part!r}")
            split[name] = part
    return split


def load_features(features_path, split_path, non_negative=False):
    """Read a feature CSV and its split manifest into a validated dataset.

    Data rows are numbered from 1 (the header is line 1, so row ``r`` is on
    line ``r + 1``). With ``non_negative=True`` any negative value is rejected.
    """
    split = _read_split(split_path)
    labels, rows = [], []
    with open(features_path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty feature file", line=1)
        d = len(header) - 1
        if d < 1 or header[0] != "label" or header[1:] != [f"f{j}" for j in range(d)]:
            raise ParseError("header must be 'label,f0,...,f{d-1}'", line=1)
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != d + 1:
                raise ParseError(f"expected {d + 1} fields, got {len(record)}", line=lineno)
            values = []
            for col, cell in enumerate(record[1:], start=2):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"cannot parse {cell!r} as a number", line=lineno, column=col) from None
                if not math.isfinite(v):
                    raise ValidationError(f"non-finite value {cell!r} at row {lineno - 1} (line {lineno}), column f{col - 2}",
                                          row=lineno - 1, column=col - 2)
                if non_negative and v < 0:
                    raise ValidationError(f"negative value {cell!r} at row {lineno - 1} (line {lineno}), column f{col - 2}",
                                          row=lineno - 1, column=col - 2)
                values.append(v)
            labels.append(record[0])
            rows.append(values)
    feats = np.array(rows, dtype=np.float64).reshape(len(rows), d)
    return FeatureDataset(feats, np.array(labels, dtype=str), split, non_negative=non_negative)


def save_features(dataset, features_path, split_path=None):
    """Write the canonical form of ``dataset``; floats use the shortest round-tripping repr."""
    with open(features_path, "w", newline="", encoding="utf-8") as f:
        f.write(",".join(["label"] + [f"f{j}" for j in range(dataset.dim)]) + "\n")
        for label, row in zip(dataset.labels, dataset.features):
            f.write(",".join([str(label)] + [repr(float(v)) for v in row]) + "\n")
    if split_path is not None:
        with open(split_path, "w", newline="", encoding="utf-8") as f:
            for name in dataset.classes():
                f.write(f"{name},{dataset.split[name]}\n")
