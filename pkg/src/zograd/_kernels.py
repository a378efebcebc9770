"""Compiled inner loops for the quadratic objective family.

The update rules here are bit-for-bit the same arithmetic as the generic
Python path would perform on a quadratic: the two function values behind the
finite difference are genuinely evaluated (via the cached matrix-vector
products), so rounding behaves like real two-point queries.

Each kernel returns -1 on success or the iteration index at which a
non-finite value first appeared.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def quad_gd_kernel(A, y0, U, alpha, L, out_delta, out_eta, out_unorm_sq, out_zeta, out_gnorm_sq):
    """Fixed-step run on f(x) = 1/2 y^T A y, y = x - x*.

    ``U`` is the (T, d) matrix of pre-drawn directions.  Outputs are filled
    in place: suboptimality (T+1), step sizes, squared direction norms and
    normalized squared projections (T each).
    """
    T = U.shape[0]
    y = y0.copy()
    for t in range(T):
        Ay = np.dot(A, y)
        delta = 0.5 * np.dot(y, Ay)
        if not np.isfinite(delta):
            return t
        out_delta[t] = delta
        u = U[t]
        Au = np.dot(A, u)
        unorm_sq = np.dot(u, u)
        yp = y + alpha * u
        ym = y - alpha * u
        fp = 0.5 * np.dot(yp, Ay + alpha * Au)
        fm = 0.5 * np.dot(ym, Ay - alpha * Au)
        q = (fp - fm) / (2.0 * alpha)
        eta = 1.0 / (4.0 * L * unorm_sq)
        gnorm_sq = np.dot(Ay, Ay)
        out_gnorm_sq[t] = gnorm_sq
        if gnorm_sq > 0.0:
            s = np.dot(u, Ay)
            out_zeta[t] = s * s / (unorm_sq * gnorm_sq)
        else:
            out_zeta[t] = np.nan
        out_eta[t] = eta
        out_unorm_sq[t] = unorm_sq
        y = y - (eta * q) * u
    Ay = np.dot(A, y)
    delta = 0.5 * np.dot(y, Ay)
    if not np.isfinite(delta):
        return T
    out_delta[T] = delta
    return -1


@njit(cache=True)
def quad_sgd_kernel(
    A,
    y0,
    xstar,
    B,
    c,
    xi,
    U,
    alpha,
    mu,
    T0,
    out_delta,
    out_eta,
    out_unorm_sq,
    out_zeta,
    out_gnorm_sq,
):
    """Decaying-step run on the finite-sum quadratic family.

    Component i is f(x) - B[i]^T x + c[i]; both queries of step t use the
    component ``xi[t]``.  Step size is 2d / (mu (t + T0) ||u_t||^2).
    """
    T = U.shape[0]
    d = U.shape[1]
    y = y0.copy()
    for t in range(T):
        Ay = np.dot(A, y)
        delta = 0.5 * np.dot(y, Ay)
        if not np.isfinite(delta):
            return t
        out_delta[t] = delta
        u = U[t]
        Au = np.dot(A, u)
        unorm_sq = np.dot(u, u)
        b = B[xi[t]]
        ci = c[xi[t]]
        yp = y + alpha * u
        ym = y - alpha * u
        fp = 0.5 * np.dot(yp, Ay + alpha * Au) - np.dot(b, xstar + yp) + ci
        fm = 0.5 * np.dot(ym, Ay - alpha * Au) - np.dot(b, xstar + ym) + ci
        q = (fp - fm) / (2.0 * alpha)
        eta = 2.0 * d / (mu * (t + T0) * unorm_sq)
        gnorm_sq = np.dot(Ay, Ay)
        out_gnorm_sq[t] = gnorm_sq
        if gnorm_sq > 0.0:
            s = np.dot(u, Ay)
            out_zeta[t] = s * s / (unorm_sq * gnorm_sq)
        else:
            out_zeta[t] = np.nan
        out_eta[t] = eta
        out_unorm_sq[t] = unorm_sq
        y = y - (eta * q) * u
    Ay = np.dot(A, y)
    delta = 0.5 * np.dot(y, Ay)
    if not np.isfinite(delta):
        return T
    out_delta[T] = delta
    return -1
