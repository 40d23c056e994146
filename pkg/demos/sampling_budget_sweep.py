"""
How many sampled points are enough?
===================================

Sweep the per-class budget p for Gaussian sampling, with the support-only
classifier as the p = 0 baseline.
"""

from logtukey import data
from logtukey import fewshot as fs

ds = data.generate(data.GaussianMixtureClasses(seed=42))

base = fs.run_trials(ds, fs.EpisodeSpec(samples=0), "none", n_trials=1, tasks_per_trial=30)
print(f"p=   0  support only  {100 * base.mean:6.2f}%")
for p in (10, 50, 150, 300):
    rep = fs.run_trials(ds, fs.EpisodeSpec(samples=p), "gs", n_trials=1, tasks_per_trial=30)
    print(f"p={p:4d}  {rep.sampled_per_task:5d} sampled  {100 * rep.mean:6.2f}% +- {100 * rep.ci95:.2f}")
