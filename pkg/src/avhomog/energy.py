"""Pointwise energy density W(xi) = a|xi|^p/p + c|xi|^2/2 and its xi-derivatives.

All derivatives have closed forms.  The scalar gradient is strictly
increasing, so its inverse (needed for the semi-analytic 1D route) is
computed by a safeguarded Newton iteration bracketed by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EnergyParams:
    """Coefficients of the two-term density: exponent p >= 2, a > 0, c >= 0."""

    p: float
    a: float
    c: float

    def __post_init__(self):
        if not self.p >= 2.0:
            raise ValueError(f"exponent p must be >= 2, got {self.p}")
        if not self.a > 0.0:
            raise ValueError(f"coefficient a must be > 0, got {self.a}")
        if not self.c >= 0.0:
            raise ValueError(f"coefficient c must be >= 0, got {self.c}")


def eval_W(params, xi):
    """Density value a|xi|^p/p + c|xi|^2/2; nonnegative, zero iff xi = 0."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    r = float(np.linalg.norm(xi))
    return params.a * r**params.p / params.p + params.c * r * r / 2.0


def eval_grad_W(params, xi):
    """Gradient a|xi|^{p-2} xi + c xi, with the zero vector returned at xi = 0."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    r = float(np.linalg.norm(xi))
    if r == 0.0:
        return np.zeros_like(xi)
    return (params.a * r ** (params.p - 2.0) + params.c) * xi


def eval_hess_W(params, xi):
    """Hessian a(|xi|^{p-2} Id + (p-2)|xi|^{p-4} xi xi^T) + c Id.

    The rank-one term is defined as 0 at xi = 0 (its limit for p > 2), which
    removes the removable |xi|^{p-4} singularity.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    d = xi.size
    r = float(np.linalg.norm(xi))
    hess = params.c * np.eye(d)
    if r > 0.0:
        hess += params.a * r ** (params.p - 2.0) * np.eye(d)
        hess += params.a * (params.p - 2.0) * r ** (params.p - 4.0) * np.outer(xi, xi)
    return hess


def eval_psi(params, zeta):
    """Inverse of the scalar gradient: the unique x with a x|x|^{p-2} + c x = zeta.

    Newton iteration safeguarded by bisection on [0, B] with
    B = (|zeta|/a)^{1/(p-1)} + |zeta|/max(c, a); always converges since the
    map is strictly increasing.
    """
    zeta = float(zeta)
    if zeta == 0.0:
        return 0.0
    a, c, p = params.a, params.c, params.p
    s = abs(zeta)
    lo = 0.0
    hi = (s / a) ** (1.0 / (p - 1.0)) + s / max(c, a)
    x = min((s / a) ** (1.0 / (p - 1.0)), s / max(c, a))
    tol = 1e-14 * max(1.0, s)
    for _ in range(200):
        res = a * x ** (p - 1.0) + c * x - s
        if abs(res) <= tol:
            break
        if res > 0.0:
            hi = x
        else:
            lo = x
        slope = a * (p - 1.0) * x ** (p - 2.0) + c
        x_new = x - res / slope if slope > 0.0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    return math.copysign(x, zeta)


# Vectorized forms used by the assembly routines: a, c are per-row
# coefficients and eta has one evaluation point per row.

def w_values(a, c, p, eta):
    """Density at each row of eta."""
    r2 = np.einsum("td,td->t", eta, eta)
    r = np.sqrt(r2)
    return a * r**p / p + c * r2 / 2.0


def grad_values(a, c, p, eta):
    """Gradient at each row of eta, shape (n, d)."""
    r = np.sqrt(np.einsum("td,td->t", eta, eta))
    return (a * r ** (p - 2.0) + c)[:, None] * eta


def hess_values(a, c, p, eta):
    """Hessian at each row of eta, shape (n, d, d)."""
    n, d = eta.shape
    r2 = np.einsum("td,td->t", eta, eta)
    r = np.sqrt(r2)
    iso = a * r ** (p - 2.0) + c
    rsafe = np.where(r > 0.0, r, 1.0)
    aniso = np.where(r > 0.0, a * (p - 2.0) * rsafe ** (p - 4.0), 0.0)
    hess = iso[:, None, None] * np.eye(d)[None, :, :]
    hess = hess + aniso[:, None, None] * eta[:, :, None] * eta[:, None, :]
    return hess
