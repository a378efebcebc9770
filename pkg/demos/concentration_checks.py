"""Empirical soundness checks for the concentration toolbox.

Each validator draws many independent realizations of the random quantity
a tail inequality controls and counts how often the bound is violated;
the empirical rate must not exceed the claimed failure probability (up to
binomial noise).  These are the same building blocks the convergence
analysis chains together, so checking them in isolation localizes any
looseness or bug.

Run with:  python3 demos/concentration_checks.py
"""

from zograd import validate_lemma

CASES = [
    ("laurent_massart", {"delta": 0.05, "trials": 4000}),
    ("chi_min", {"N": 100, "k_dof": 200, "delta": 0.05, "trials": 4000}),
    ("suffix_uniform", {"T": 1000, "d": 10, "delta": 0.1, "trials": 300}),
    ("linear_martingale", {"K": 200, "T0": 100.0, "sigma": 1.0, "trials": 2000}),
    ("quadratic_term", {"K": 100, "T0": 100.0, "sigma": 1.0, "trials": 2000}),
]

print(f"{'validator':<20s} {'trials':>7s} {'claimed':>8s} {'observed':>9s} {'margin':>8s}")
for name, params in CASES:
    report = validate_lemma(name, params, master_seed=21)
    print(
        f"{name:<20s} {report.trials:>7d} {report.claimed_delta:>8.3f} "
        f"{report.empirical_rate:>9.4f} {report.margin:>+8.4f}"
    )
print()
print("margin = claimed - observed; nonnegative (up to binomial noise) means sound")
