"""
Gaussian sampling versus distribution calibration
=================================================

A synthetic dataset of skewed, non-negative features stands in for the
output of a pretrained extractor. Both methods see the same episodes.
"""

import numpy as np

from logtukey import data
from logtukey import fewshot as fs
from logtukey.errors import TransformMismatch
from logtukey.transforms import TransformSpec

ds = data.generate(data.GaussianMixtureClasses(seed=42))
print("classes:", {p: len(ds.classes(p)) for p in ("base", "validation", "novel")}, "dim", ds.dim)

# One episode, trained both ways.
spec = fs.EpisodeSpec(n_way=5, k_shot=5, q_query=15, samples=150)
episode_rng, train_rng = fs.task_streams(master_seed=0, trial=0, task=0)
episode = fs.sample_episode(ds, spec, episode_rng)
gs = fs.train_gaussian_sampling(episode, spec.samples, rng=train_rng)
dc = fs.train_distribution_calibration(episode, fs.compute_base_stats(ds), spec.samples,
                                       rng=np.random.default_rng(1))
print("GS sampled", gs.n_sampled, "points, DC sampled", dc.n_sampled)
print("GS accuracy", fs.evaluate(gs, episode.query_x, episode.query_y, gs.transform))
print("DC accuracy", fs.evaluate(dc, episode.query_x, episode.query_y, dc.transform))

# Scoring with the wrong transform is refused.
try:
    fs.evaluate(gs, episode.query_x, episode.query_y, TransformSpec.tukey(0.5))
except TransformMismatch as exc:
    print("refused:", exc)

# A small trial run, laid out as per-trial rows plus an average.
without = fs.run_trials(ds, spec, "dc", n_trials=3, tasks_per_trial=20)
with_gs = fs.run_trials(ds, spec, "gs", n_trials=3, tasks_per_trial=20)
for trial, a, b, diff in fs.comparison_rows(without, with_gs):
    print(f"{trial:>4s}  DC {a:6.2f}  GS {b:6.2f}  diff {diff:+6.2f}")
