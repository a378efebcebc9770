"""Empirical validators for the concentration inequalities behind the bounds.

Each ``validate_*`` function simulates the random objects of one inequality
many times, evaluates the claimed bound, and reports how often the bound was
violated next to the failure probability it promises.  A healthy inequality
shows an empirical violation rate at or below its delta (usually far below,
since the bounds are conservative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import RngStream
from .objectives import ParameterError
from .theory import rho_weights


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: str
    trials: int
    violations: int
    claimed_delta: float
    empirical_rate: float
    margin: float


def _report(lemma_id: str, trials: int, violations: int, delta: float) -> LemmaReport:
    rate = violations / trials
    return LemmaReport(
        lemma_id=lemma_id,
        trials=trials,
        violations=violations,
        claimed_delta=delta,
        empirical_rate=rate,
        margin=delta - rate,
    )


@dataclass(frozen=True)
class SuffixSumStats:
    """Weighted suffix sums of a projection-statistic series."""

    zeta_series: np.ndarray
    weights: np.ndarray

    def suffix_sum(self, k: int) -> float:
        """Sum of w_t zeta_t over t > k."""
        return float(self.weights[k + 1 :] @ self.zeta_series[k + 1 :])


def beta_raw_moment(m: int, a: float, b: float) -> float:
    """m-th raw moment of Beta(a, b): prod_{j<m} (a+j)/(a+b+j)."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"need a, b > 0, got a={a}, b={b}")
    if m < 0:
        raise ParameterError(f"need m >= 0, got {m}")
    out = 1.0
    for j in range(m):
        out *= (a + j) / (a + b + j)
    return out


def validate_beta_projection(
    d: int,
    n_samples: int,
    rng: RngStream,
    samples: np.ndarray | None = None,
) -> LemmaReport:
    """Moment check of the squared normalized projection law.

    For u ~ N(0, I_d) and a fixed unit vector a, the statistic
    zeta = (u^T a)^2 / ||u||^2 is Beta(1/2, (d-1)/2): mean 1/d and second
    raw moment 3/(d(d+2)).  Both sample moments must land within five
    standard errors.  Pass ``samples`` to check a harvested zeta series
    instead of fresh i.i.d. draws.
    """
    if d < 2:
        raise ParameterError(f"need d >= 2 for a proper Beta law, got d={d}")
    if samples is None:
        if n_samples < 2:
            raise ParameterError(f"need n_samples >= 2, got {n_samples}")
        u = rng.generator.standard_normal((n_samples, d))
        # Projection onto the first coordinate axis; rotation invariance
        # makes any fixed unit vector equivalent.
        zeta = u[:, 0] ** 2 / np.einsum("nd,nd->n", u, u)
    else:
        zeta = np.asarray(samples, dtype=np.float64)
        zeta = zeta[np.isfinite(zeta)]
        if zeta.size < 2:
            raise ParameterError("need at least 2 finite samples")
    n = zeta.size
    mean_target = beta_raw_moment(1, 0.5, (d - 1) / 2.0)
    m2_target = beta_raw_moment(2, 0.5, (d - 1) / 2.0)
    se_mean = zeta.std(ddof=1) / math.sqrt(n)
    z2 = zeta**2
    se_m2 = z2.std(ddof=1) / math.sqrt(n)
    ok = abs(zeta.mean() - mean_target) <= 5.0 * se_mean and abs(z2.mean() - m2_target) <= 5.0 * se_m2
    # Five standard errors: false-failure probability below 1e-6 per check.
    return _report("beta_projection", 1, 0 if ok else 1, 2e-6)


def laurent_massart_bound(weights: Sequence[float], delta: float) -> float:
    """Upper tail threshold for a weighted sum of squared standard normals.

    sum w + 2 sqrt(sum w^2 log(1/delta)) + 2 max(w) log(1/delta); the sum
    exceeds it with probability at most delta.
    """
    if not 0 < delta < 1:
        raise ParameterError(f"need delta in (0, 1), got {delta}")
    w = np.asarray(weights, dtype=np.float64)
    if w.size == 0:
        return 0.0
    if np.any(w < 0):
        raise ParameterError("weights must be nonnegative")
    log_d = math.log(1.0 / delta)
    return float(w.sum() + 2.0 * math.sqrt((w**2).sum() * log_d) + 2.0 * w.max() * log_d)


def validate_laurent_massart(
    weights: Sequence[float], delta: float, trials: int, rng: RngStream
) -> LemmaReport:
    """Monte Carlo check of the weighted chi-square upper tail bound."""
    w = np.asarray(weights, dtype=np.float64)
    if trials < 1:
        raise ParameterError(f"need trials >= 1, got {trials}")
    bound = laurent_massart_bound(w, delta)
    z = rng.generator.standard_normal((trials, w.size))
    lhs = (z**2) @ w
    violations = int(np.count_nonzero(lhs > bound))
    return _report("laurent_massart", trials, violations, delta)


def chi_min_threshold(N: int, k_dof: int, delta: float) -> float:
    """Lower bound for the min of N chi-square(k) draws, failure prob delta."""
    if N < 1 or k_dof < 1:
        raise ParameterError(f"need N >= 1 and k_dof >= 1, got N={N}, k_dof={k_dof}")
    if not 0 < delta < 1:
        raise ParameterError(f"need delta in (0, 1), got {delta}")
    return k_dof - 2.0 * math.sqrt(k_dof * (math.log(N) + math.log(1.0 / delta)))


def validate_chi_min(
    N: int, k_dof: int, delta: float, trials: int, rng: RngStream
) -> LemmaReport:
    """Check the minimum of N chi-square draws against its lower threshold.

    When k_dof >= 16 log(N/delta) the threshold is at least k_dof/2, so
    every non-violating trial also clears k_dof/2; that corollary is
    asserted as part of the check.
    """
    if trials < 1:
        raise ParameterError(f"need trials >= 1, got {trials}")
    threshold = chi_min_threshold(N, k_dof, delta)
    mins = rng.generator.chisquare(k_dof, size=(trials, N)).min(axis=1)
    violations = int(np.count_nonzero(mins < threshold))
    if k_dof >= 16.0 * math.log(N / delta):
        assert threshold >= k_dof / 2.0
        violations += int(np.count_nonzero((mins >= threshold) & (mins < k_dof / 2.0)))
    return _report("chi_min", trials, violations, delta)


def suffix_sum_lower_bound(
    weights: Sequence[float], d: int, delta: float, k: int
) -> float:
    """High-probability lower bound for sum_{t>k} w_t zeta_t.

    Weights must be positive and nonincreasing.  Returns
    W_k/d - (2 sqrt(2 Q_k log(1/delta)) + 2 w_{k+1} log(1/delta)) / d with
    W_k, Q_k the suffix sums of w and w^2 over t > k.
    """
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0):
        raise ParameterError("weights must be positive")
    if np.any(np.diff(w) > 0):
        raise ParameterError("weights must be nonincreasing")
    if not 0 < delta < 1:
        raise ParameterError(f"need delta in (0, 1), got {delta}")
    if not -1 <= k <= w.size - 2:
        raise ParameterError(f"need -1 <= k <= {w.size - 2}, got {k}")
    tail = w[k + 1 :]
    W_k = tail.sum()
    Q_k = (tail**2).sum()
    log_d = math.log(1.0 / delta)
    return float(
        (W_k - 2.0 * math.sqrt(2.0 * Q_k * log_d) - 2.0 * tail[0] * log_d) / d
    )


def uniform_suffix_rhs(T: int, d: int, delta: float, k: np.ndarray) -> np.ndarray:
    """RHS of the simultaneous suffix bound for every cut point k."""
    return (T - k - 1) / (2.0 * d) - (250.0 / d) * (
        1.0 + math.log(1.0 / delta) + np.log(np.log(2.0 * (T - k)))
    )


def validate_uniform_suffix(
    T: int,
    d: int,
    delta: float,
    trials: int,
    rng: RngStream,
    zeta_source: Sequence[np.ndarray] | None = None,
) -> LemmaReport:
    """Simultaneous-in-k lower bound on suffix sums of zeta.

    Per trial, sum_{t=k+1}^{T-1} zeta_t must clear
    (T-k-1)/(2d) - (250/d)(1 + log(1/delta) + log log(2(T-k))) for every
    k in 0..T-2 at once.  ``zeta_source`` supplies harvested series (one
    per trial); by default fresh Beta(1/2, (d-1)/2) draws are used.
    """
    if T < 2:
        raise ParameterError(f"need T >= 2, got {T}")
    if d < 2:
        raise ParameterError(f"need d >= 2, got {d}")
    if zeta_source is not None:
        trials = len(zeta_source)
    if trials < 1:
        raise ParameterError(f"need trials >= 1, got {trials}")
    ks = np.arange(0, T - 1)
    rhs = uniform_suffix_rhs(T, d, delta, ks)
    violations = 0
    for i in range(trials):
        if zeta_source is None:
            zeta = rng.generator.beta(0.5, (d - 1) / 2.0, size=T)
        else:
            zeta = np.nan_to_num(np.asarray(zeta_source[i], dtype=np.float64)[:T], nan=0.0)
            if zeta.size != T:
                raise ParameterError(f"series {i} has length {zeta.size}, need {T}")
        # suffix[k] = sum_{t > k} zeta_t
        suffix = np.cumsum(zeta[::-1])[::-1]
        if np.any(suffix[1:] < rhs):
            violations += 1
    return _report("suffix_uniform", trials, violations, delta)


def freedman_tail(tau: float, sigma_sq: float, R: float) -> float:
    """Martingale tail exp(-tau^2 / (2 (sigma^2 + R tau)))."""
    if not (tau > 0 and sigma_sq > 0 and R > 0):
        raise ParameterError(
            f"need positive tau, sigma_sq, R, got {tau}, {sigma_sq}, {R}"
        )
    return math.exp(-(tau**2) / (2.0 * (sigma_sq + R * tau)))


def max_bernstein_tail(x: float, N: int, v_sq: float, b: float) -> float:
    """Maximal-sum martingale tail exp(-x^2 / (2 (N v^2 + b x)))."""
    if not (x > 0 and N > 0 and v_sq > 0 and b > 0):
        raise ParameterError(f"need positive x, N, v_sq, b, got {x}, {N}, {v_sq}, {b}")
    return math.exp(-(x**2) / (2.0 * (N * v_sq + b * x)))


def _rho_series(K: int, T0: float, delta: float) -> np.ndarray:
    """rho_{K,k} for k = 0..K-1 with the per-pair failure budget delta/K^2."""
    delta_K = delta / (8.0 * K)
    delta_Kk = delta / K**2
    return np.array(
        [rho_weights(K, k, T0, delta_K, delta_Kk)[1] for k in range(K)]
    )


def validate_linear_martingale(
    K: int,
    T0: float,
    sigma: float,
    trials: int,
    rng: RngStream,
    delta: float = 0.05,
    d: int = 10,
) -> LemmaReport:
    """Azuma-style bound on the linear noise term of the stochastic method.

    Synthesizes the martingale Y_k = (rho_{K,k}/T_k) (w^T u_k)(u_k^T e_k)
    / ||u_k||^2 with a fixed gradient w, fresh Gaussian directions u_k, and
    symmetric two-point noise e_k = +/- b with ||b|| = sigma.  Checks
    sum Y_k <= sqrt(2 V_K log(1/delta)) with the realized variance proxy
    V_K = sum (rho_{K,k} |w^T u_k| sigma / (T_k ||u_k||))^2.
    """
    if not (K >= 1 and T0 > 0 and sigma >= 0 and trials >= 1):
        raise ParameterError(
            f"need K >= 1, T0 > 0, sigma >= 0, trials >= 1, got {K}, {T0}, {sigma}, {trials}"
        )
    if not 0 < delta < 1:
        raise ParameterError(f"need delta in (0, 1), got {delta}")
    rho = _rho_series(K, T0, delta)
    T_k = np.arange(K) + T0
    w = np.ones(d)  # fixed gradient direction; scale cancels in the check
    b = np.zeros(d)
    b[0] = sigma
    log_d = math.log(1.0 / delta)
    violations = 0
    for _ in range(trials):
        u = rng.generator.standard_normal((K, d))
        signs = rng.generator.integers(0, 2, size=K) * 2 - 1
        unorm_sq = np.einsum("kd,kd->k", u, u)
        wu = u @ w
        ue = signs * (u @ b)
        y = (rho / T_k) * wu * ue / unorm_sq
        v_K = float(np.sum((rho / T_k * np.abs(wu) / np.sqrt(unorm_sq) * sigma) ** 2))
        if y.sum() > math.sqrt(2.0 * v_K * log_d) + 1e-15:
            violations += 1
    return _report("linear_martingale", trials, violations, delta)


def validate_quadratic_term(
    K: int, T0: float, sigma: float, delta: float, trials: int, rng: RngStream
) -> LemmaReport:
    """Weighted chi-square bound on the squared noise projections.

    Simulates (u_k^T e_k)^2 as sigma^2 z_k^2 (its law for ||e_k|| = sigma
    after conditioning) and checks
    sum_k (rho_{K,k}/T_k^2) (u_k^T e_k)^2 <= sigma^2 * LM(rho/T_k^2, delta)
    with LM the weighted chi-square threshold.
    """
    if not (K >= 1 and T0 > 0 and sigma >= 0 and trials >= 1):
        raise ParameterError(
            f"need K >= 1, T0 > 0, sigma >= 0, trials >= 1, got {K}, {T0}, {sigma}, {trials}"
        )
    rho = _rho_series(K, T0, delta)
    weights = rho / (np.arange(K) + T0) ** 2
    bound = sigma**2 * laurent_massart_bound(weights, delta)
    z = rng.generator.standard_normal((trials, K))
    lhs = sigma**2 * ((z**2) @ weights)
    violations = int(np.count_nonzero(lhs > bound + 1e-15))
    return _report("quadratic_term", trials, violations, delta)
