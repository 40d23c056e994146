"""Command-line front end.

    logtukey eval [--n N] [--seed S] [--format csv|markdown|plain] [--out FILE]
    logtukey density --source exponential --transform tukey --out DIR
    logtukey fewshot --method compare --trials 5 --tasks 100 --p 150

Exit codes: 0 success, 2 bad configuration, 3 failed computation,
4 bad or insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import data, fewshot
from .comparison import compare_transforms, default_sources
from .errors import DataError, GaussianizeError
from .stats import GaussianRef, kde_curve, moments
from .transforms import BOX_COX, YEO_JOHNSON, TransformSpec, apply_all, fit_lambda

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_DATA = 0, 2, 3, 4


class ConfigError(Exception):
    pass


def _num(x):
    return f"{x:.4f}"


def render(header, rows, fmt):
    rows = [[str(c) for c in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows([header] + rows)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + rows]
    return "\n".join(lines) + "\n"


def emit(text, out):
    if out:
        with open(out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def read_column(path):
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=1, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return values.ravel()


def source_data(name, n, seed):
    if name == "uniform":
        return data.generate(data.Uniform(0.0, 1.0, n, seed))
    if name == "exponential":
        return data.generate(data.Exponential(0.5, n, seed))
    return data.iris_feature(0)


def resolve_transform(text, xs=None):
    """Parse a transform name; a bare ``boxcox``/``yeojohnson`` is fit to ``xs``."""
    name = text.strip().lower().replace("-", "").replace("_", "")
    if name in ("boxcox", "yeojohnson") and xs is not None:
        family = BOX_COX if name == "boxcox" else YEO_JOHNSON
        return TransformSpec(family, fit_lambda(xs, family))
    try:
        return TransformSpec.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args):
    if args.data:
        sources = [(os.path.basename(args.data), read_column(args.data))]
    else:
        sources = default_sources(args.n, args.seed)
    rows = []
    for name, xs in sources:
        for r in compare_transforms(xs, name):
            param = "" if r.transform.param is None else _num(r.transform.param)
            rows.append([r.source, r.transform.label, param, _num(r.mean), _num(r.std_dev),
                         _num(r.wasserstein), "1" if r.is_min else "0"])
    header = ["source", "transform", "param", "mean", "std_dev", "wasserstein", "is_min"]
    emit(render(header, rows, args.format), args.out)
    return EXIT_OK


def cmd_density(args):
    xs = read_column(args.data) if args.data else source_data(args.source, args.n, args.seed)
    spec = resolve_transform(args.transform, xs)
    y = apply_all(spec, xs)
    curve = kde_curve(y, args.grid_size)
    m = moments(y)
    ref = GaussianRef(m.mean, m.std_dev)
    reference = type(curve)(curve.xs, ref.pdf(curve.xs))
    os.makedirs(args.out, exist_ok=True)
    curve.to_csv(os.path.join(args.out, "kde.csv"))
    reference.to_csv(os.path.join(args.out, "gaussian.csv"))
    rows = [["kde", _num(curve.mode)], ["gaussian", _num(reference.mode)],
            ["mode_gap", _num(curve.mode - reference.mode)]]
    sys.stdout.write(render(["curve", "mode"], rows, args.format))
    return EXIT_OK


def _parse_grid(text):
    try:
        grid = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--p-grid must be comma-separated integers, got {text!r}") from None
    if not grid or any(v <= 0 for v in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("--p-grid must be strictly increasing positive integers")
    return grid


def _dataset(args, transforms):
    non_negative = any(t.requires_non_negative for t in transforms)
    if args.features or args.splits:
        if not (args.features and args.splits):
            raise ConfigError("--features and --splits must be given together")
        for path in (args.features, args.splits):
            if not os.path.exists(path):
                raise ConfigError(f"no such file: {path}")
        return data.load_features(args.features, args.splits, non_negative=non_negative)
    preset = {"skewed": {}, "separable": {"mean_scale": 2.0, "spread": 0.05}}[args.synthetic]
    return data.generate(data.GaussianMixtureClasses(samples_per_class=args.n or 40, seed=args.seed, **preset))


def cmd_fewshot(args):
    grid = _parse_grid(args.p_grid) if args.p_grid else [args.p]
    methods = ["dc", "gs"] if args.method == "compare" else [args.method]
    user_transform = resolve_transform(args.transform) if args.transform else None
    options = {
        m: fewshot.MethodOptions(transform=user_transform, regularization=args.reg,
                                 k_neighbors=args.k_neighbors, alpha=args.alpha)
        for m in methods
    }
    try:
        specs = {p: fewshot.EpisodeSpec(args.n_way, args.k_shot, args.q_query, p) for p in grid}
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.k_neighbors < 1 or args.alpha < 0 or args.reg < 0:
        raise ConfigError("--k-neighbors must be >= 1, --alpha and --reg >= 0")
    dataset = _dataset(args, [options[m].resolved_transform(m) for m in methods])

    def run(method, p):
        return fewshot.run_trials(dataset, specs[p], method, args.trials, args.tasks, args.seed,
                                  options[method], workers=args.workers)

    if args.p_grid:
        rows = []
        for p in grid:
            for m in methods:
                r = run(m, p)
                rows.append([str(p), m, _num(100 * r.mean), _num(100 * r.ci95), str(r.sampled_per_task)])
        header = ["p", "method", "accuracy", "ci95", "sampled_per_task"]
    elif args.method == "compare":
        without, with_gs = run("dc", grid[0]), run("gs", grid[0])
        rows = [[t] + [_num(v) for v in vals] for t, *vals in fewshot.comparison_rows(without, with_gs)]
        header = ["trial", "without_gs", "with_gs", "difference"]
    else:
        r = run(args.method, grid[0])
        rows = [[str(t), _num(100 * a)] for t, a in enumerate(r.trial_accuracies, start=1)]
        rows.append(["Avg", _num(100 * r.mean)])
        header = ["trial", "accuracy"]
    emit(render(header, rows, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _uint64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_uint64, default=42)
    common.add_argument("--n", type=_positive, default=None, help="sample size (synthetic sources)")
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "markdown", "plain"), default="csv")

    parser = argparse.ArgumentParser(prog="logtukey", description="Gaussianization transforms and few-shot sampling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="compare transforms on the benchmark samples")
    p.add_argument("--data", help="evaluate one column of numbers from this file instead")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("density", parents=[common], help="KDE and moment-matched Gaussian curves")
    p.add_argument("--source", choices=("uniform", "exponential", "iris"), default="exponential")
    p.add_argument("--data", help="read one column of numbers from this file instead of --source")
    p.add_argument("--transform", default="logtukey")
    p.add_argument("--grid-size", type=int, default=256)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("fewshot", parents=[common], help="episodic few-shot trials")
    p.add_argument("--method", choices=("gs", "dc", "none", "compare"), default="compare")
    p.add_argument("--n-way", type=int, default=5)
    p.add_argument("--k-shot", type=int, default=5)
    p.add_argument("--q-query", type=int, default=15)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--p", type=int, default=150, help="points sampled per class (gs) or support point (dc)")
    group.add_argument("--p-grid", help="comma-separated sweep of --p values")
    p.add_argument("--transform", help="override the method's default transform")
    p.add_argument("--alpha", type=float, default=0.21, help="calibration covariance inflation (dc)")
    p.add_argument("--reg", type=float, default=0.1, help="covariance regularization (gs)")
    p.add_argument("--k-neighbors", type=int, default=2)
    p.add_argument("--trials", type=_positive, default=5)
    p.add_argument("--tasks", type=_positive, default=100)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--features")
    p.add_argument("--splits")
    p.add_argument("--synthetic", choices=("skewed", "separable"), default="skewed")
    p.set_defaults(func=cmd_fewshot)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    if args.command in ("eval", "density") and args.n is None:
        args.n = 10_000
    if args.command == "density" and not args.out:
        print("error: density needs --out DIR", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GaussianizeError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
