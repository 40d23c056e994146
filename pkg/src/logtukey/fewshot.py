"""Episodic few-shot classification with Gaussian-sampled training features.

Two trainers share one classifier:

* :func:`train_gaussian_sampling` transforms the support set, fits one
  Gaussian per class and draws ``samples`` points per class (``N * p`` in
  total);
* :func:`train_distribution_calibration` calibrates every support point
  against its nearest base-class statistics and draws ``samples`` points
  around each of them (``N * K * p`` in total).

Both then fit a multinomial logistic regression on sampled plus support
features. Classifiers remember the transform they were trained with and
refuse to score data prepared with a different one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    ClassifierDivergence,
    DegenerateLabels,
    EmptyInput,
    InsufficientData,
    MismatchedDimensions,
    TransformMismatch,
)
from .stats import MultivariateGaussian, estimate_classwise_gaussian, sample_mvg
from .transforms import TransformSpec, apply_all

GAUSSIAN_SAMPLING = "gs"
DISTRIBUTION_CALIBRATION = "dc"
NO_SAMPLING = "none"
METHODS = (GAUSSIAN_SAMPLING, DISTRIBUTION_CALIBRATION, NO_SAMPLING)


@dataclass(frozen=True)
class EpisodeSpec:
    """Shape of an N-way-K-shot task.

    ``samples`` is the sampling budget: points drawn per class for Gaussian
    sampling, per support point for distribution calibration. Zero trains on
    the support set alone.
    """

    n_way: int = 5
    k_shot: int = 5
    q_query: int = 15
    samples: int = 150

    def __post_init__(self):
        if self.n_way < 2:
            raise ValueError(f"n_way must be >= 2, got {self.n_way}")
        if self.k_shot < 1 or self.q_query < 1:
            raise ValueError("k_shot and q_query must be >= 1")
        if self.samples < 0:
            raise ValueError(f"samples must be >= 0, got {self.samples}")


@dataclass(frozen=True, eq=False)
class Episode:
    support_x: np.ndarray
    support_y: np.ndarray
    query_x: np.ndarray
    query_y: np.ndarray
    class_ids: tuple = ()
    support_rows: np.ndarray | None = None
    query_rows: np.ndarray | None = None

    @property
    def n_way(self):
        return int(max(self.support_y.max(), self.query_y.max())) + 1


@dataclass(frozen=True, eq=False)
class BaseClassStats:
    class_ids: tuple
    means: np.ndarray        # (B, d)
    covariances: np.ndarray  # (B, d, d)
    transform: TransformSpec

    @property
    def dim(self):
        return self.means.shape[1]


@dataclass(frozen=True)
class ClassifierConfig:
    learning_rate: float = 0.5
    epochs: int = 300
    l2_penalty: float = 1e-3
    batch_mode: str = "full"

    def __post_init__(self):
        if self.batch_mode != "full":
            raise ValueError(f"only full-batch gradient descent is supported, not {self.batch_mode!r}")
        if self.learning_rate <= 0 or self.epochs < 0 or self.l2_penalty < 0:
            raise ValueError("learning_rate must be > 0, epochs and l2_penalty >= 0")


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """Class scores ``x @ weights.T + bias``.

    ``transform`` is the feature transform used at training time (``None``
    when the classifier was fit on raw features). ``n_sampled`` counts the
    synthetic training points and ``n_train`` all training points.
    """

    weights: np.ndarray
    bias: np.ndarray
    transform: TransformSpec | None = None
    n_sampled: int = 0
    n_train: int = 0
    initial_loss: float = math.nan
    final_loss: float = math.nan

    def scores(self, x):
        return np.asarray(x, dtype=np.float64) @ self.weights.T + self.bias

    def predict(self, x):
        # np.argmax returns the first maximum: ties go to the lowest class index
        return np.argmax(self.scores(x), axis=1)


@dataclass(frozen=True)
class MethodOptions:
    """Per-method settings for :func:`run_trials`; ``transform=None`` picks the method default."""

    transform: TransformSpec | None = None
    regularization: float = 0.1
    k_neighbors: int = 2
    alpha: float = 0.21
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)

    def resolved_transform(self, method):
        if self.transform is not None:
            return self.transform
        return TransformSpec.tukey(0.5) if method == DISTRIBUTION_CALIBRATION else TransformSpec.log_tukey()


@dataclass(frozen=True, eq=False)
class TrialReport:
    method: str
    task_accuracies: np.ndarray  # (n_trials, tasks_per_trial)
    sampled_per_task: int

    @property
    def n_trials(self):
        return self.task_accuracies.shape[0]

    @property
    def tasks_per_trial(self):
        return self.task_accuracies.shape[1]

    @property
    def trial_accuracies(self):
        return self.task_accuracies.mean(axis=1)

    @property
    def mean(self):
        return float(np.mean(self.trial_accuracies))

    @property
    def ci95(self):
        """Half-width of the normal-approximation 95% interval over all tasks."""
        acc = self.task_accuracies.ravel()
        if acc.size < 2:
            return 0.0
        return float(1.96 * np.std(acc, ddof=1) / math.sqrt(acc.size))


# ---------------------------------------------------------------------------
# episodes


def sample_episode(dataset, spec, rng):
    """Draw an N-way-K-shot task from the novel classes of ``dataset``."""
    novel = dataset.classes("novel")
    need = spec.k_shot + spec.q_query
    for name in novel:
        if len(dataset.rows_of(name)) < need:
            raise InsufficientData(
                f"novel class {name!r} has {len(dataset.rows_of(name))} rows, needs {need}", class_name=name)
    if len(novel) < spec.n_way:
        raise InsufficientData(f"{len(novel)} novel classes available, need {spec.n_way}")
    chosen = rng.choice(len(novel), size=spec.n_way, replace=False)
    support, query = [], []
    for name in (novel[i] for i in chosen):
        rows = rng.permutation(dataset.rows_of(name))[:need]
        support.append(rows[: spec.k_shot])
        query.append(rows[spec.k_shot:])
    support_rows = np.concatenate(support)
    query_rows = np.concatenate(query)
    return Episode(
        support_x=dataset.features[support_rows],
        support_y=np.repeat(np.arange(spec.n_way), spec.k_shot),
        query_x=dataset.features[query_rows],
        query_y=np.repeat(np.arange(spec.n_way), spec.q_query),
        class_ids=tuple(novel[i] for i in chosen),
        support_rows=support_rows,
        query_rows=query_rows,
    )


# ---------------------------------------------------------------------------
# classifier


def softmax_loss_and_grad(weights, bias, x, y, l2_penalty):
    """L2-regularized mean cross-entropy and its gradient with respect to (weights, bias)."""
    x = np.asarray(x, dtype=np.float64)
    return _loss_and_grad(weights, bias, x, np.ascontiguousarray(x.T), np.asarray(y), l2_penalty)


def _loss_and_grad(weights, bias, x, xt, y, l2_penalty):
    # scores kept as (classes, samples): the thin matmuls are markedly faster in this layout
    n = x.shape[0]
    cols = np.arange(n)
    scores = weights @ xt + bias[:, None]
    scores -= scores.max(axis=0)
    expd = np.exp(scores)
    norm = expd.sum(axis=0)
    loss = (np.log(norm).sum() - scores[y, cols].sum()) / n + 0.5 * l2_penalty * float(np.vdot(weights, weights))
    expd /= norm
    expd[y, cols] -= 1.0
    grad_w = expd @ x / n + l2_penalty * weights
    grad_b = expd.sum(axis=1) / n
    return float(loss), grad_w, grad_b


def train_logistic_regression(features, labels, config=None, n_classes=None):
    """Multinomial logistic regression by full-batch gradient descent from zero weights.

    A step that would raise the loss is rejected and the learning rate
    halved, so the training loss never increases.
    """
    config = config or ClassifierConfig()
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.intp)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise MismatchedDimensions(f"features {x.shape} and labels {y.shape} disagree")
    if x.shape[0] == 0:
        raise EmptyInput("no training data")
    if np.unique(y).size < 2:
        raise DegenerateLabels("need at least two classes to train a classifier")
    k = int(y.max()) + 1 if n_classes is None else n_classes
    w = np.zeros((k, x.shape[1]))
    b = np.zeros(k)
    xt = np.ascontiguousarray(x.T)
    lr = config.learning_rate
    loss, gw, gb = _loss_and_grad(w, b, x, xt, y, config.l2_penalty)
    initial = loss
    for _ in range(config.epochs):
        w_new = w - lr * gw
        b_new = b - lr * gb
        new_loss, new_gw, new_gb = _loss_and_grad(w_new, b_new, x, xt, y, config.l2_penalty)
        if not math.isfinite(new_loss):
            if not math.isfinite(loss):
                break
            lr /= 2.0
            continue
        if new_loss > loss:
            lr /= 2.0
            continue
        w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
    if not math.isfinite(loss):
        raise ClassifierDivergence(f"training loss is {loss}")
    return LinearClassifier(w, b, n_train=x.shape[0], initial_loss=initial, final_loss=loss)


def evaluate(classifier, query_x, query_y, transform):
    """Fraction of query points classified correctly after applying ``transform``."""
    if transform != classifier.transform:
        raise TransformMismatch(f"classifier was trained with {classifier.transform}, evaluated with {transform}")
    y = np.asarray(query_y)
    if y.size == 0:
        raise EmptyInput("empty query set")
    x = apply_all(transform, query_x)
    return float(np.mean(classifier.predict(x) == y))


# ---------------------------------------------------------------------------
# trainers


def _fit(x_support, y_support, sampled_x, sampled_y, n_way, transform, config):
    x = np.vstack(sampled_x + [x_support])
    y = np.concatenate(sampled_y + [y_support])
    clf = train_logistic_regression(x, y, config, n_classes=n_way)
    return replace(clf, transform=transform, n_sampled=x.shape[0] - x_support.shape[0])


def train_gaussian_sampling(episode, samples, transform=None, regularization=0.1, config=None, rng=None):
    """Gaussian sampling: per-class Gaussians fit on transformed support features.

    ``samples`` points are drawn per class from ``Normal(mean, cov +
    regularization * I)``. Returns the classifier trained on sampled plus
    transformed support features.
    """
    transform = transform or TransformSpec.log_tukey()
    rng = rng if rng is not None else np.random.default_rng()
    xs = apply_all(transform, episode.support_x)
    ys = np.asarray(episode.support_y)
    n_way = int(ys.max()) + 1
    sampled_x, sampled_y = [], []
    if samples > 0:
        for c in range(n_way):
            g = estimate_classwise_gaussian(xs[ys == c])
            sampled_x.append(sample_mvg(g, samples, regularization, rng).samples)
            sampled_y.append(np.full(samples, c))
    return _fit(xs, ys, sampled_x, sampled_y, n_way, transform, config)


def compute_base_stats(dataset, transform=None):
    """Mean and covariance of every base class, computed on transformed features."""
    transform = transform or TransformSpec.tukey(0.5)
    names = dataset.classes("base")
    if not names:
        raise InsufficientData("dataset has no base classes")
    gaussians = [estimate_classwise_gaussian(apply_all(transform, dataset.features[dataset.rows_of(c)]))
                 for c in names]
    return BaseClassStats(
        class_ids=tuple(names),
        means=np.stack([g.mean for g in gaussians]),
        covariances=np.stack([g.covariance for g in gaussians]),
        transform=transform,
    )


def calibrate(point, base, k_neighbors, alpha):
    """Calibrated Gaussian for one transformed support point.

    The mean averages the point with its ``k_neighbors`` nearest base-class
    means; the covariance averages their covariances and adds ``alpha * I``.
    """
    dist = np.linalg.norm(base.means - point, axis=1)
    nearest = np.argsort(dist, kind="stable")[:k_neighbors]
    mean = (point + base.means[nearest].sum(axis=0)) / (k_neighbors + 1)
    cov = base.covariances[nearest].mean(axis=0) + alpha * np.eye(point.size)
    return MultivariateGaussian(mean, cov)


def train_distribution_calibration(episode, base, samples, k_neighbors=2, alpha=0.21,
                                   transform=None, config=None, rng=None):
    """Distribution-calibration baseline: ``samples`` draws around every calibrated support point."""
    transform = transform or TransformSpec.tukey(0.5)
    rng = rng if rng is not None else np.random.default_rng()
    xs = apply_all(transform, episode.support_x)
    ys = np.asarray(episode.support_y)
    if xs.shape[1] != base.dim:
        raise MismatchedDimensions(f"support features have dimension {xs.shape[1]}, base statistics {base.dim}")
    if not 1 <= k_neighbors <= base.means.shape[0]:
        raise ValueError(f"k_neighbors must be in 1..{base.means.shape[0]}, got {k_neighbors}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    n_way = int(ys.max()) + 1
    sampled_x, sampled_y = [], []
    if samples > 0:
        for point, label in zip(xs, ys):
            g = calibrate(point, base, k_neighbors, alpha)
            sampled_x.append(sample_mvg(g, samples, 0.0, rng).samples)
            sampled_y.append(np.full(samples, label))
    return _fit(xs, ys, sampled_x, sampled_y, n_way, transform, config)


def train_support_only(episode, transform=None, config=None):
    transform = transform or TransformSpec.log_tukey()
    xs = apply_all(transform, episode.support_x)
    ys = np.asarray(episode.support_y)
    return _fit(xs, ys, [], [], int(ys.max()) + 1, transform, config)


# ---------------------------------------------------------------------------
# trials


def task_streams(master_seed, trial, task):
    """Independent (episode, training) random streams for one task."""
    ep, train = np.random.SeedSequence([master_seed, trial, task]).spawn(2)
    return np.random.default_rng(ep), np.random.default_rng(train)


def run_task(dataset, spec, method, options, base, master_seed, trial, task):
    """Accuracy and sampled-point count for one task."""
    episode_rng, train_rng = task_streams(master_seed, trial, task)
    episode = sample_episode(dataset, spec, episode_rng)
    transform = options.resolved_transform(method)
    if method == GAUSSIAN_SAMPLING:
        clf = train_gaussian_sampling(episode, spec.samples, transform, options.regularization,
                                      options.classifier, train_rng)
    elif method == DISTRIBUTION_CALIBRATION:
        clf = train_distribution_calibration(episode, base, spec.samples, options.k_neighbors, options.alpha,
                                             transform, options.classifier, train_rng)
    else:
        clf = train_support_only(episode, transform, options.classifier)
    return evaluate(clf, episode.query_x, episode.query_y, transform), clf.n_sampled


def run_trials(dataset, spec, method, n_trials=5, tasks_per_trial=100, master_seed=0,
               options=None, workers=1):
    """Evaluate ``method`` on ``n_trials x tasks_per_trial`` seeded episodes.

    The streams of task ``j`` in trial ``t`` depend only on
    ``(master_seed, t, j)``, so the report does not depend on ``workers``
    and two methods run with the same seed see identical episodes.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if n_trials < 1 or tasks_per_trial < 1:
        raise ValueError("n_trials and tasks_per_trial must be >= 1")
    options = options or MethodOptions()
    base = None
    if method == DISTRIBUTION_CALIBRATION:
        base = compute_base_stats(dataset, options.resolved_transform(method))
    jobs = [(t, j) for t in range(n_trials) for j in range(tasks_per_trial)]

    def one(job):
        return run_task(dataset, spec, method, options, base, master_seed, *job)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(job) for job in jobs]
    acc = np.array([r[0] for r in results]).reshape(n_trials, tasks_per_trial)
    sampled = {r[1] for r in results}
    return TrialReport(method, acc, sampled.pop() if len(sampled) == 1 else -1)


def comparison_rows(without, with_gs):
    """Rows ``(trial, without_gs, with_gs, difference)`` in percent, ending with the ``Avg`` row."""
    if without.task_accuracies.shape != with_gs.task_accuracies.shape:
        raise MismatchedDimensions("reports cover different numbers of trials or tasks")
    rows = []
    for t, (a, b) in enumerate(zip(without.trial_accuracies, with_gs.trial_accuracies), start=1):
        rows.append((str(t), 100 * a, 100 * b, 100 * (b - a)))
    rows.append(("Avg", 100 * without.mean, 100 * with_gs.mean, 100 * (with_gs.mean - without.mean)))
    return rows
