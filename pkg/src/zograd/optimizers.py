"""Zeroth-order gradient descent, deterministic and stochastic variants.

Both methods draw a fresh Gaussian direction each step, form the two-point
gradient estimate along it, and move against it.  The deterministic variant
uses the fixed step 1/(4 L ||u_t||^2); the stochastic one uses the decaying
schedule 2d / (mu (t + T0) ||u_t||^2) and re-queries one finite-sum
component per step.

Quadratic instances dispatch to compiled kernels; any other objective falls
back to a plain Python loop through the estimator module.  The gradient
oracle is touched only to record the diagnostic projection statistic
zeta_t = (u_t^T grad f(x_t))^2 / (||u_t||^2 ||grad f(x_t)||^2), never for
the update itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .estimators import (
    DirectionSample,
    NumericError,
    two_point_estimate,
    two_point_estimate_stochastic,
)
from .numerics import RngStream, Vector, as_vector
from .objectives import Objective, ParameterError, StochasticObjective


@dataclass(frozen=True)
class ZoGdConfig:
    T: int
    alpha: float
    x0: Vector
    seed: int

    def __post_init__(self):
        if self.T < 0:
            raise ParameterError(f"T must be >= 0, got {self.T}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class ZoSgdConfig:
    T: int
    T0: float
    alpha: float
    x0: Vector
    seed: int

    def __post_init__(self):
        if self.T < 0:
            raise ParameterError(f"T must be >= 0, got {self.T}")
        if not self.T0 > 0:
            raise ParameterError(f"T0 must be positive, got {self.T0}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class Trajectory:
    """Per-iteration record of one run.

    ``suboptimality`` has length T+1 (before the first and after the last
    step); the other arrays have length T.  ``zeta`` entries are NaN where
    the gradient vanished (the statistic is undefined there).
    """

    suboptimality: np.ndarray
    step_sizes: np.ndarray
    direction_norm_sq: np.ndarray
    zeta: np.ndarray
    grad_norm_sq: np.ndarray
    total_queries: int
    seed: int

    @property
    def final_suboptimality(self) -> float:
        return float(self.suboptimality[-1])


def step_size_gd(L: float, norm_sq_u: float) -> float:
    if not (L > 0 and norm_sq_u > 0):
        raise ParameterError(f"need L > 0 and ||u||^2 > 0, got {L}, {norm_sq_u}")
    return 1.0 / (4.0 * L * norm_sq_u)


def step_size_sgd(d: int, mu: float, t: int, T0: float, norm_sq_u: float) -> float:
    if not (d > 0 and mu > 0 and T0 > 0 and norm_sq_u > 0):
        raise ParameterError(
            f"need positive d, mu, T0, ||u||^2, got {d}, {mu}, {T0}, {norm_sq_u}"
        )
    if t < 0:
        raise ParameterError(f"t must be >= 0, got {t}")
    return 2.0 * d / (mu * (t + T0) * norm_sq_u)


def _draw_directions(T: int, d: int, rng: RngStream) -> np.ndarray:
    """Pre-draw all step directions; resample any zero-norm row once."""
    U = rng.generator.standard_normal((T, d))
    if T > 0:
        bad = np.flatnonzero(np.einsum("td,td->t", U, U) == 0.0)
        for t in bad:
            U[t] = rng.generator.standard_normal(d)
            if float(U[t] @ U[t]) == 0.0:
                raise NumericError(f"zero-norm direction at step {t} after resample")
    return U


def _alloc(T: int):
    return (
        np.empty(T + 1),
        np.empty(T),
        np.empty(T),
        np.empty(T),
        np.empty(T),
    )


def _zeta(u: Vector, grad: Vector, unorm_sq: float) -> float:
    gnorm_sq = float(grad @ grad)
    if gnorm_sq == 0.0:
        return np.nan
    s = float(u @ grad)
    return s * s / (unorm_sq * gnorm_sq)


def run_zo_gd(obj: Objective, cfg: ZoGdConfig) -> Trajectory:
    """Run the fixed-step method for cfg.T steps; deterministic given seed."""
    x0 = as_vector(cfg.x0, obj.dim)
    rng = RngStream(cfg.seed)
    U = _draw_directions(cfg.T, obj.dim, rng)
    delta, eta, unorm_sq, zeta, gnorm_sq = _alloc(cfg.T)
    if obj.quadratic_matrix is not None:
        status = _kernels.quad_gd_kernel(
            obj.quadratic_matrix,
            np.ascontiguousarray(x0 - obj.optimum_point),
            U,
            cfg.alpha,
            obj.smoothness,
            delta,
            eta,
            unorm_sq,
            zeta,
            gnorm_sq,
        )
        if status >= 0:
            raise NumericError(f"non-finite iterate at step {status}")
    else:
        x = x0.copy()
        for t in range(cfg.T):
            delta[t] = obj.eval(x) - obj.optimum_value
            if not np.isfinite(delta[t]):
                raise NumericError(f"non-finite iterate at step {t}")
            u = U[t]
            dir = DirectionSample(u=u, norm_sq=float(u @ u))
            est = two_point_estimate(obj, x, cfg.alpha, dir)
            eta[t] = step_size_gd(obj.smoothness, dir.norm_sq)
            unorm_sq[t] = dir.norm_sq
            g_t = obj.grad(x)
            gnorm_sq[t] = float(g_t @ g_t)
            zeta[t] = _zeta(u, g_t, dir.norm_sq)
            x = x - eta[t] * est.g
        delta[cfg.T] = obj.eval(x) - obj.optimum_value
        if not np.isfinite(delta[cfg.T]):
            raise NumericError(f"non-finite iterate at step {cfg.T}")
    np.maximum(delta, 0.0, out=delta)
    return Trajectory(
        suboptimality=delta,
        step_sizes=eta,
        direction_norm_sq=unorm_sq,
        zeta=zeta,
        grad_norm_sq=gnorm_sq,
        total_queries=2 * cfg.T,
        seed=cfg.seed,
    )


def run_zo_sgd(sobj: StochasticObjective, cfg: ZoSgdConfig) -> Trajectory:
    """Run the decaying-step stochastic method; deterministic given seed."""
    obj = sobj.base
    x0 = as_vector(cfg.x0, obj.dim)
    rng = RngStream(cfg.seed)
    U = _draw_directions(cfg.T, obj.dim, rng)
    xi = rng.generator.integers(0, sobj.n_components, size=cfg.T)
    delta, eta, unorm_sq, zeta, gnorm_sq = _alloc(cfg.T)
    if obj.quadratic_matrix is not None and sobj.tilts is not None:
        status = _kernels.quad_sgd_kernel(
            obj.quadratic_matrix,
            np.ascontiguousarray(x0 - obj.optimum_point),
            obj.optimum_point,
            sobj.tilts,
            sobj.offsets,
            xi,
            U,
            cfg.alpha,
            obj.strong_convexity,
            cfg.T0,
            delta,
            eta,
            unorm_sq,
            zeta,
            gnorm_sq,
        )
        if status >= 0:
            raise NumericError(f"non-finite iterate at step {status}")
    else:
        x = x0.copy()
        for t in range(cfg.T):
            delta[t] = obj.eval(x) - obj.optimum_value
            if not np.isfinite(delta[t]):
                raise NumericError(f"non-finite iterate at step {t}")
            u = U[t]
            dir = DirectionSample(u=u, norm_sq=float(u @ u))
            est = two_point_estimate_stochastic(sobj, x, cfg.alpha, dir, int(xi[t]))
            eta[t] = step_size_sgd(obj.dim, obj.strong_convexity, t, cfg.T0, dir.norm_sq)
            unorm_sq[t] = dir.norm_sq
            g_t = obj.grad(x)
            gnorm_sq[t] = float(g_t @ g_t)
            zeta[t] = _zeta(u, g_t, dir.norm_sq)
            x = x - eta[t] * est.g
        delta[cfg.T] = obj.eval(x) - obj.optimum_value
        if not np.isfinite(delta[cfg.T]):
            raise NumericError(f"non-finite iterate at step {cfg.T}")
    np.maximum(delta, 0.0, out=delta)
    return Trajectory(
        suboptimality=delta,
        step_sizes=eta,
        direction_norm_sq=unorm_sq,
        zeta=zeta,
        grad_norm_sq=gnorm_sq,
        total_queries=2 * cfg.T,
        seed=cfg.seed,
    )


def contraction_certificate(
    traj: Trajectory, obj: Objective, alpha: float
) -> tuple[float, float]:
    """(final suboptimality, certified upper bound) for one quadratic run.

    The bound combines the geometric factor exp(-(mu/8L) sum zeta_t) with
    the accumulated smoothing bias (L alpha^2 / 16) sum_k rho_hat_k
    ||u_k||^2, rho_hat_k = exp(-(mu/8L) sum_{t>k} zeta_t).  It holds
    deterministically on quadratics because the finite-difference bias
    vanishes there.
    """
    c = obj.strong_convexity / (8.0 * obj.smoothness)
    zeta = np.nan_to_num(traj.zeta, nan=0.0)
    prefix = np.cumsum(zeta)
    total = prefix[-1] if len(prefix) else 0.0
    # sum_k exp(-c (total - prefix_k)) ||u_k||^2, computed stably.
    rho_hat = np.exp(-c * (total - prefix))
    bias = (obj.smoothness * alpha**2 / 16.0) * float(rho_hat @ traj.direction_norm_sq)
    bound = np.exp(-c * total) * float(traj.suboptimality[0]) + bias
    return traj.final_suboptimality, float(bound)
