"""Synthetic strongly convex objectives with known constants and optimum.

The quadratic family ``f(x) = 1/2 (x - x*)^T A (x - x*)`` is the workhorse:
``A`` is built with an exact eigenvalue span ``[mu, L]`` so the smoothness and
strong-convexity constants fed to the optimizers are tight, and the optimum is
known exactly so suboptimality can be measured without error.

The finite-sum variant adds per-component linear tilts ``-b_i^T x`` with
``sum_i b_i = 0`` and ``max_i ||b_i|| = sigma``, which realises an unbiased
stochastic gradient oracle whose noise bound holds with equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import DimensionMismatchError, RngStream, Vector, as_vector


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Objective:
    """A smooth, strongly convex function with exact metadata.

    ``grad`` is a diagnostic oracle only; the zeroth-order optimizers never
    call it for their updates.
    """

    dim: int
    smoothness: float
    strong_convexity: float
    optimum_point: Vector
    optimum_value: float
    eval: Callable[[Vector], float]
    grad: Callable[[Vector], Vector]
    # Set for the quadratic family; enables the fast simulation kernels.
    quadratic_matrix: Vector | None = field(default=None, repr=False)

    def __post_init__(self):
        if not (0.0 < self.strong_convexity <= self.smoothness):
            raise ParameterError(
                f"need 0 < mu <= L, got mu={self.strong_convexity}, L={self.smoothness}"
            )


@dataclass(frozen=True)
class StochasticObjective:
    """Finite-sum objective ``f = (1/n) sum_i f_i`` with bounded noise.

    Component gradients satisfy ``grad f_i(x) - grad f(x) = -b_i`` with
    ``||b_i|| <= noise_bound`` everywhere.
    """

    base: Objective
    n_components: int
    noise_bound: float
    eval_component: Callable[[Vector, int], float]
    grad_component: Callable[[Vector, int], Vector]
    # (n, d) tilt matrix and (n,) offsets for the quadratic family.
    tilts: Vector | None = field(default=None, repr=False)
    offsets: Vector | None = field(default=None, repr=False)


def _spd_matrix(d: int, mu: float, L: float, rng: RngStream) -> np.ndarray:
    """Random SPD matrix with eigenvalues spanning exactly [mu, L]."""
    if d == 1:
        return np.array([[L]])
    lam = np.exp(rng.generator.uniform(np.log(mu), np.log(L), size=d))
    lam[0] = mu
    lam[1] = L
    g = rng.generator.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return (q * lam) @ q.T


def _ball_point(d: int, radius: float, rng: RngStream) -> Vector:
    g = rng.generator.standard_normal(d)
    g /= np.linalg.norm(g)
    r = radius * rng.generator.uniform() ** (1.0 / d)
    return r * g


def make_quadratic(d: int, mu: float, L: float, rng: RngStream) -> Objective:
    """Quadratic instance ``f(x) = 1/2 (x-x*)^T A (x-x*)`` with f* = 0."""
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    if not (0.0 < mu <= L):
        raise ParameterError(f"need 0 < mu <= L, got mu={mu}, L={L}")
    A = _spd_matrix(d, mu, L, rng)
    # Symmetrize against rounding so eval/grad are exactly consistent.
    A = 0.5 * (A + A.T)
    xstar = _ball_point(d, 10.0, rng)

    def _eval(x: Vector) -> float:
        y = as_vector(x, d) - xstar
        return 0.5 * float(y @ (A @ y))

    def _grad(x: Vector) -> Vector:
        y = as_vector(x, d) - xstar
        return A @ y

    return Objective(
        dim=d,
        smoothness=L,
        strong_convexity=mu,
        optimum_point=xstar,
        optimum_value=0.0,
        eval=_eval,
        grad=_grad,
        quadratic_matrix=A,
    )


def make_finite_sum(
    d: int, mu: float, L: float, sigma: float, n: int, rng: RngStream
) -> StochasticObjective:
    """Finite-sum quadratic ``f_i(x) = f(x) - b_i^T x + c_i``.

    The tilts are centered (``sum b_i = 0``) and scaled so the largest has
    norm exactly ``sigma``; offsets ``c_i = b_i^T x*`` keep the component
    average equal to the base function.
    """
    if n < 2:
        raise ParameterError(f"need n >= 2 components, got {n}")
    if sigma < 0:
        raise ParameterError(f"need sigma >= 0, got {sigma}")
    base = make_quadratic(d, mu, L, rng)
    b = rng.generator.standard_normal((n, d))
    b -= b.mean(axis=0)
    norms = np.linalg.norm(b, axis=1)
    if sigma == 0.0 or norms.max() == 0.0:
        b = np.zeros((n, d))
    else:
        b *= sigma / norms.max()
    c = b @ base.optimum_point

    def _eval_component(x: Vector, i: int) -> float:
        if not 0 <= i < n:
            raise IndexError(f"component index {i} out of range [0, {n})")
        return base.eval(x) - float(b[i] @ x) + float(c[i])

    def _grad_component(x: Vector, i: int) -> Vector:
        if not 0 <= i < n:
            raise IndexError(f"component index {i} out of range [0, {n})")
        return base.grad(x) - b[i]

    return StochasticObjective(
        base=base,
        n_components=n,
        noise_bound=sigma,
        eval_component=_eval_component,
        grad_component=_grad_component,
        tilts=b,
        offsets=c,
    )


def suboptimality(obj: Objective, x: Vector) -> float:
    """f(x) - f*, clamped at zero (the clamp only absorbs rounding)."""
    x = as_vector(x)
    if x.shape[0] != obj.dim:
        raise DimensionMismatchError(f"expected dimension {obj.dim}, got {x.shape[0]}")
    return max(0.0, obj.eval(x) - obj.optimum_value)
