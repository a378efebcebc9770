"""The normalized projection statistic follows a Beta(1/2, (d-1)/2) law.

Each step of the random-direction methods projects the gradient onto a
Gaussian direction; the squared cosine between the two is the quantity
that drives every progress bound.  This demo checks its law twice:

  * on i.i.d. draws, via the closed-form raw moments, and
  * on the statistic harvested from actual optimizer trajectories, where
    the direction and the gradient are dependent across steps but each
    step's cosine still follows the same law.

Run with:  python3 demos/direction_statistic_law.py
"""

import numpy as np

from zograd import (
    RngStream,
    ZoGdConfig,
    beta_raw_moment,
    derive_seed,
    make_quadratic,
    run_zo_gd,
    validate_beta_projection,
)

D = 10

report = validate_beta_projection(D, 200_000, RngStream(3))
print(f"i.i.d. draws, d={D}: violations={report.violations} "
      f"(moment checks at 5 standard errors)")
print(f"  target mean 1/d = {beta_raw_moment(1, 0.5, (D - 1) / 2):.4f}, "
      f"target 2nd moment 3/(d(d+2)) = {beta_raw_moment(2, 0.5, (D - 1) / 2):.5f}")
print()

obj = make_quadratic(D, 0.1, 1.0, RngStream(4, spawn_key=(0,)))
harvested = []
for i in range(30):
    cfg = ZoGdConfig(T=800, alpha=1e-5, x0=np.zeros(D), seed=derive_seed(4, i + 1))
    traj = run_zo_gd(obj, cfg)
    harvested.append(traj.zeta[np.isfinite(traj.zeta)])
pooled = np.concatenate(harvested)

report = validate_beta_projection(D, 0, RngStream(5), samples=pooled)
print(f"harvested from {len(harvested)} trajectories ({pooled.size} samples): "
      f"violations={report.violations}")
print(f"  sample mean {pooled.mean():.4f}, sample 2nd moment {np.mean(pooled**2):.5f}")
