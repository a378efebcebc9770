"""Two-point zeroth-order gradient estimators.

The estimate along a Gaussian direction ``u`` is

    g(x) = [f(x + alpha u) - f(x - alpha u)] / (2 alpha) * u,

which decomposes as ``g = (u^T grad f(x)) u + beta u`` where the residual
``beta`` is bounded by ``(L alpha / 2) ||u||^2`` for L-smooth f.  Each
estimate costs exactly two function evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import RngStream, Vector, as_vector, gaussian_vector, norm_sq
from .objectives import Objective, ParameterError, StochasticObjective


class NumericError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DirectionSample:
    """A random direction with its squared norm cached."""

    u: Vector
    norm_sq: float


@dataclass(frozen=True)
class GradEstimate:
    g: Vector
    queries_used: int
    smoothing: float


def sample_direction(d: int, rng: RngStream) -> DirectionSample:
    u = gaussian_vector(d, rng)
    return DirectionSample(u=u, norm_sq=norm_sq(u))


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise ParameterError(f"smoothing parameter must be positive, got {alpha}")


def _quotient(fp: float, fm: float, alpha: float) -> float:
    if not (np.isfinite(fp) and np.isfinite(fm)):
        raise NumericError(f"non-finite objective values f+={fp}, f-={fm}")
    return (fp - fm) / (2.0 * alpha)


def two_point_estimate(
    obj: Objective, x: Vector, alpha: float, dir: DirectionSample
) -> GradEstimate:
    """Two-query estimate of the gradient of ``obj`` at ``x``."""
    _check_alpha(alpha)
    x = as_vector(x, obj.dim)
    u = as_vector(dir.u, obj.dim)
    fp = obj.eval(x + alpha * u)
    fm = obj.eval(x - alpha * u)
    return GradEstimate(g=_quotient(fp, fm, alpha) * u, queries_used=2, smoothing=alpha)


def two_point_estimate_stochastic(
    sobj: StochasticObjective,
    x: Vector,
    alpha: float,
    dir: DirectionSample,
    component_index: int,
) -> GradEstimate:
    """Two-query stochastic estimate; both queries use the same component."""
    _check_alpha(alpha)
    d = sobj.base.dim
    x = as_vector(x, d)
    u = as_vector(dir.u, d)
    fp = sobj.eval_component(x + alpha * u, component_index)
    fm = sobj.eval_component(x - alpha * u, component_index)
    return GradEstimate(g=_quotient(fp, fm, alpha) * u, queries_used=2, smoothing=alpha)


def beta_residual(obj: Objective, x: Vector, alpha: float, dir: DirectionSample) -> float:
    """Residual beta in the decomposition g = (u^T grad f) u + beta u.

    Zero on quadratics (the central difference is exact there); in general
    bounded by (L alpha / 2) ||u||^2.
    """
    _check_alpha(alpha)
    x = as_vector(x, obj.dim)
    u = as_vector(dir.u, obj.dim)
    fp = obj.eval(x + alpha * u)
    fm = obj.eval(x - alpha * u)
    return _quotient(fp, fm, alpha) - float(u @ obj.grad(x))
