"""Closed-form constants and bounds for the two zeroth-order methods.

Everything here is a pure function of problem parameters: iteration counts,
smoothing parameters, the high-probability bound for the deterministic
method, and the constant system (T0, Lambda, c_rho, c_delta, curly_C,
rho_K, rho_Kk) governing the stochastic method's O(1/T) guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .objectives import ParameterError


def _require_positive(**params: float) -> None:
    for name, value in params.items():
        if not value > 0:
            raise ParameterError(f"{name} must be positive, got {value}")


def gd_iterations(
    d: int, L: float, mu: float, Delta0: float, eps: float, delta: float
) -> int:
    """Iteration count sufficient for the fixed-step method to reach eps.

    T = ceil((16 d L / mu) log(2 Delta0 / eps) + 8 log(3/delta)), at least 1.
    The log term is clamped at zero when eps >= 2 Delta0.
    """
    _require_positive(d=d, L=L, mu=mu, Delta0=Delta0, eps=eps, delta=delta)
    log_term = max(0.0, math.log(2.0 * Delta0 / eps))
    t = (16.0 * d * L / mu) * log_term + 8.0 * math.log(3.0 / delta)
    return max(1, math.ceil(t))


def gd_second_term_factor(T: int, delta: float, d: int, L: float, mu: float) -> float:
    """The bracketed factor multiplying d L alpha^2 / 16 in the final bound."""
    _require_positive(T=T, delta=delta, d=d, L=L, mu=mu)
    log3d = math.log(3.0 / delta)
    return 1004.0 + 1000.0 * (log3d + math.log(math.log(2.0 * T))) + 32.0 * d * L / mu + 3.0 * log3d


def gd_alpha(
    d: int, L: float, mu: float, eps: float, delta: float, T: int, c_alpha: float = 1.0
) -> float:
    """Smoothing parameter making the bias term of the bound at most eps/2.

    Returns c_alpha * min of two branches: sqrt(eps mu) / (d L), and the
    exact solve of (d L alpha^2 / 16) * factor(T, delta) = eps / 2.
    """
    _require_positive(d=d, L=L, mu=mu, eps=eps, delta=delta, c_alpha=c_alpha)
    if T < 2:
        raise ParameterError(f"need T >= 2 for the log log term, got {T}")
    branch1 = math.sqrt(eps * mu) / (d * L)
    branch2 = math.sqrt(8.0 * eps / (d * L * gd_second_term_factor(T, delta, d, L, mu)))
    return c_alpha * min(branch1, branch2)


def gd_bound_rhs(
    T: int, alpha: float, delta: float, Delta0: float, d: int, L: float, mu: float
) -> float:
    """High-probability suboptimality bound after T fixed-step iterations.

    exp(-(mu/8L)(T/(2d) - 4 log(3/delta)/d)) Delta0
      + (d L alpha^2 / 16) * factor(T, delta).
    """
    _require_positive(T=T, delta=delta, Delta0=Delta0, d=d, L=L, mu=mu)
    if alpha < 0:
        raise ParameterError(f"alpha must be nonnegative, got {alpha}")
    geometric = math.exp(-(mu / (8.0 * L)) * (T / (2.0 * d) - 4.0 * math.log(3.0 / delta) / d)) * Delta0
    bias = (d * L * alpha**2 / 16.0) * gd_second_term_factor(T, delta, d, L, mu)
    return geometric + bias


@dataclass(frozen=True)
class GdTheory:
    """Prescribed schedule and bound evaluator for the fixed-step method."""

    T: int
    alpha: float
    bound_rhs: Callable[..., float]


def gd_theory(
    d: int,
    L: float,
    mu: float,
    Delta0: float,
    eps: float,
    delta: float,
    c_alpha: float = 1.0,
) -> GdTheory:
    T = gd_iterations(d, L, mu, Delta0, eps, delta)
    T = max(T, 2)
    alpha = gd_alpha(d, L, mu, eps, delta, T, c_alpha=c_alpha)
    return GdTheory(T=T, alpha=alpha, bound_rhs=gd_bound_rhs)


def sgd_warmup(d: int, L: float, mu: float) -> float:
    """Warmup offset T0 = 16 d L / mu in the decaying step schedule."""
    _require_positive(d=d, L=L, mu=mu)
    return 16.0 * d * L / mu


def sgd_alpha(d: int, T: int, T0: float) -> float:
    _require_positive(d=d, T=T, T0=T0)
    return 1.0 / math.sqrt(d * (T + T0))


@dataclass(frozen=True)
class SgdTheory:
    """Constant system behind the stochastic method's O(1/T) bound."""

    dim: int
    T0: float
    alpha: float
    Lambda: float
    c_rho: float
    c_delta: float
    curly_C: float
    curly_C_terms: tuple[float, float, float, float, float]
    rho_K: Callable[[int], float]
    rho_Kk: Callable[[int, int], float]

    def delta_threshold(self, k: int) -> float:
        """Per-iterate suboptimality ceiling curly_C d Lambda^2 / (k + T0)."""
        return self.curly_C * self.dim * self.Lambda**2 / (k + self.T0)


def _partial_sums(lo: int, hi: int, T0: float) -> tuple[float, float]:
    """(sum 1/(t+T0), sum 1/(t+T0)^2) over t in [lo, hi); empty sums are 0."""
    s1 = 0.0
    s2 = 0.0
    for t in range(lo, hi):
        w = 1.0 / (t + T0)
        s1 += w
        s2 += w * w
    return s1, s2


def rho_weights(
    K: int, k: int, T0: float, delta_rho_K: float, delta_rho_Kk: float
) -> tuple[float, float]:
    """Evaluate the pair of exponential decay weights (rho_K, rho_Kk).

    rho_K uses the full sum over t in [0, K); rho_Kk sums over t in (k, K)
    and its additive correction is scaled by 1/(k + 1 + T0).
    """
    _require_positive(T0=T0, delta_rho_K=delta_rho_K, delta_rho_Kk=delta_rho_Kk)
    if not 0 <= k < K:
        raise ParameterError(f"need 0 <= k < K, got k={k}, K={K}")
    s1, s2 = _partial_sums(0, K, T0)
    log_k = math.log(1.0 / delta_rho_K)
    rho_K = math.exp(-(s1 - 2.0 * math.sqrt(2.0 * s2 * log_k) - 2.0 * log_k / T0))
    s1k, s2k = _partial_sums(k + 1, K, T0)
    log_kk = math.log(1.0 / delta_rho_Kk)
    rho_Kk = math.exp(
        -(s1k - 2.0 * math.sqrt(2.0 * s2k * log_kk) - 2.0 * log_kk / (k + 1 + T0))
    )
    return rho_K, rho_Kk


def sgd_constants(
    d: int, L: float, mu: float, sigma: float, T: int, Delta0: float, delta: float
) -> SgdTheory:
    """All closed-form constants for the decaying-step stochastic method."""
    _require_positive(d=d, L=L, mu=mu, T=T, Delta0=Delta0, delta=delta)
    if sigma < 0:
        raise ParameterError(f"sigma must be nonnegative, got {sigma}")
    T0 = sgd_warmup(d, L, mu)
    alpha = sgd_alpha(d, T, T0)
    Lambda = math.log(T + T0)
    c_rho = 2.0 * math.exp(
        4.0 * math.sqrt(math.log(8.0 * T / delta) / T0) + 2.0 * math.log(T**2 / delta) / T0
    )
    c_delta = math.log(8.0 * T / delta) / math.log(T + T0)
    terms = (
        Delta0 * d * T0 / Lambda**2,
        8.0 * c_rho * T0 * Delta0 / (d * Lambda**2),
        (4096.0 * c_rho**2 * c_delta / mu**2) * (1.0 + 2.0 * c_delta / T0),
        (256.0 * L * sigma**2 / (mu**2 * Lambda)) * (1.0 + 2.0 * c_delta / T0),
        (c_rho / (4.0 * Lambda))
        * (L * (9.0 + 2.0 * L) / mu + c_delta * (36.0 + L + 4.0 * L**2) / (4.0 * d)),
    )
    curly_C = max(terms)
    delta_K = delta / (8.0 * T)
    delta_Kk = delta / T**2

    def _rho_K(K: int) -> float:
        return rho_weights(K, 0, T0, delta_K, delta_Kk)[0]

    def _rho_Kk(K: int, k: int) -> float:
        return rho_weights(K, k, T0, delta_K, delta_Kk)[1]

    return SgdTheory(
        dim=d,
        T0=T0,
        alpha=alpha,
        Lambda=Lambda,
        c_rho=c_rho,
        c_delta=c_delta,
        curly_C=curly_C,
        curly_C_terms=terms,
        rho_K=_rho_K,
        rho_Kk=_rho_Kk,
    )


def sgd_query_complexity(d: int, eps: float, delta: float, c_T: float = 1.0) -> int:
    """Iteration count for the stochastic method to reach eps, up to c_T.

    T = ceil(c_T d log(1/eps) (log(1/eps) + log(1/delta)) / eps).
    """
    _require_positive(d=d, c_T=c_T)
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise ParameterError(f"need eps, delta in (0, 1), got eps={eps}, delta={delta}")
    le = math.log(1.0 / eps)
    return max(1, math.ceil(c_T * d * le * (le + math.log(1.0 / delta)) / eps))
