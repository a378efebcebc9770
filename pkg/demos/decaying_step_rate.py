"""O(1/T) rate of the decaying-step method on a noisy finite sum.

One long trajectory per seed, with the suboptimality read off at a
geometric grid of checkpoints; the slope of log(median) against log(T)
should sit near -1 once the iterate is in the stationary noise-driven
regime.  Starting at unit distance from the minimizer skips the far-start
transient, which is what the rate statement is about.

Run with:  python3 demos/decaying_step_rate.py   (about half a minute)
"""

from zograd import ExperimentConfig, fit_loglog_slope, sweep

cfg = ExperimentConfig(
    kind="sgd",
    d=8,
    L=1.0,
    mu=0.1,
    sigma=1.0,
    n_components=12,
    x0_mode="near_optimum",
    eps=1e-9,  # unreachable on purpose: we study the decay, not a target
    delta=0.1,
    trials=50,
    master_seed=11,
)
checkpoints = [2**p for p in range(9, 16)]

summaries, slope = sweep(cfg, "T", checkpoints)

print(f"{'T':>8s}  {'median':>10s}  {'p90':>10s}")
for s in summaries:
    print(f"{s.params['T']:>8d}  {s.quantiles['p50']:>10.3e}  {s.quantiles['p90']:>10.3e}")
print()
print(f"fitted log-log slope of the median: {slope:+.3f}  (theory: about -1)")

# The same fit restricted to the last four checkpoints, where the warmup
# offset in the step size matters least:
tail = checkpoints[-4:]
tail_medians = [s.quantiles["p50"] for s in summaries[-4:]]
print(f"slope over the last four checkpoints: {fit_loglog_slope(tail, tail_medians):+.3f}")
