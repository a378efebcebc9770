"""Fixed-step random-direction descent on a strongly convex quadratic.

Builds a conditioned quadratic instance, asks the theory module for the
iteration count and smoothing parameter that target a given accuracy and
confidence, runs a handful of seeded trials, and checks two things:

  * the final suboptimality lands below the target on (at least) the
    promised fraction of runs, and
  * every trajectory satisfies its per-run contraction certificate, a
    deterministic inequality assembled from the recorded per-step
    projection statistics.

Run with:  python3 demos/fixed_step_convergence.py
"""

import numpy as np

from zograd import (
    RngStream,
    ZoGdConfig,
    contraction_certificate,
    derive_seed,
    gd_bound_rhs,
    gd_theory,
    make_quadratic,
    run_zo_gd,
    suboptimality,
)

D, L, MU = 12, 1.0, 0.1
EPS_REL, DELTA = 1e-5, 0.1
TRIALS = 40
MASTER_SEED = 7

obj = make_quadratic(D, MU, L, RngStream(MASTER_SEED, spawn_key=(0,)))
x0 = np.zeros(D)
delta0 = suboptimality(obj, x0)
eps = EPS_REL * delta0

th = gd_theory(D, L, MU, delta0, eps, DELTA)
print(f"instance: d={D}, kappa={L / MU:.0f}, Delta0={delta0:.3f}")
print(f"target:   eps={eps:.3e} with confidence {1 - DELTA}")
rhs = gd_bound_rhs(th.T, th.alpha, DELTA, delta0, D, L, MU)
print(f"schedule: T={th.T}, alpha={th.alpha:.3e}, bound rhs={rhs:.3e}")
print()

failures = 0
worst_slack = -np.inf
for i in range(TRIALS):
    cfg = ZoGdConfig(T=th.T, alpha=th.alpha, x0=x0, seed=derive_seed(MASTER_SEED, i + 1))
    traj = run_zo_gd(obj, cfg)
    final, bound = contraction_certificate(traj, obj, th.alpha)
    worst_slack = max(worst_slack, final - bound)
    failures += int(traj.final_suboptimality > eps)

print(f"failure rate: {failures}/{TRIALS} (allowed {DELTA})")
print(f"worst certificate slack (final - bound): {worst_slack:.3e}  (<= 0 means certified)")
