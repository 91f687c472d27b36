"""Semi-analytic 1D homogenization via the inverse-flux relations.

In 1D the flux zeta at the corrector is constant across the cell, so the
macroscopic gradient satisfies xi = mean_i psi_i(zeta) where psi_i inverts
the pointwise scalar gradient on cell i.  This pins down zeta (the first
derivative of the homogenized density), and the value and second derivative
follow in closed form; the module serves as the exact laminate oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .energy import EnergyParams, eval_psi


@dataclass(frozen=True)
class OneDProblem:
    a: np.ndarray
    c: np.ndarray
    p: float

    def __post_init__(self):
        if self.a.ndim != 1 or self.a.shape != self.c.shape or self.a.size == 0:
            raise ValueError("a and c must be 1D arrays of equal positive length")
        if np.any(self.a <= 0.0) or np.any(self.c < 0.0):
            raise ValueError("need a > 0 and c >= 0 per cell")

    @staticmethod
    def from_field(field, p):
        if field.d != 1:
            raise ValueError("need a 1D coefficient field")
        return OneDProblem(field.a_cells.copy(), field.c_cells.copy(), float(p))


def _unique_cells(problem):
    pairs, counts = np.unique(
        np.column_stack([problem.a, problem.c]), axis=0, return_counts=True
    )
    weights = counts / problem.a.size
    params = [EnergyParams(problem.p, float(a), float(c)) for a, c in pairs]
    return params, weights


def _mean_psi(params, weights, zeta):
    return sum(w * eval_psi(pr, zeta) for pr, w in zip(params, weights))


def _pointwise_hess(params, x):
    return params.a * (params.p - 1.0) * abs(x) ** (params.p - 2.0) + params.c


def oned_grad_wstar(problem, xi):
    """First derivative of the homogenized density: the constant flux zeta."""
    xi = float(xi)
    if xi == 0.0:
        return 0.0
    params, weights = _unique_cells(problem)
    p = problem.p
    bound = (
        float(np.max(problem.a)) * abs(xi) * (1.0 + abs(xi)) ** (p - 2.0)
        + float(np.max(problem.c)) * abs(xi)
        + 1.0
    )
    f = lambda z: _mean_psi(params, weights, z) - xi
    zeta = brentq(f, -bound, bound, xtol=1e-13, rtol=8.9e-16, maxiter=200)
    # Newton polish: d(mean psi)/dzeta = mean of 1/W''(psi)
    for _ in range(5):
        res = _mean_psi(params, weights, zeta) - xi
        if abs(res) <= 1e-13 * (1.0 + abs(xi)):
            break
        slope = sum(
            w / _pointwise_hess(pr, eval_psi(pr, zeta))
            for pr, w in zip(params, weights)
        )
        if not slope > 0.0:
            break
        zeta -= res / slope
    return zeta


def oned_value_wstar(problem, xi):
    """Homogenized density value: cell average of the energy at the corrector."""
    zeta = oned_grad_wstar(problem, float(xi))
    params, weights = _unique_cells(problem)
    total = 0.0
    for pr, w in zip(params, weights):
        x = eval_psi(pr, zeta)
        total += w * (pr.a * abs(x) ** pr.p / pr.p + pr.c * x * x / 2.0)
    return total


def oned_hess_wstar(problem, xi):
    """Second derivative: harmonic cell average of the pointwise Hessian.

    Degenerates to 0 at xi = 0 when the pointwise Hessians vanish there
    (c = 0 cells with p > 2), by continuity.
    """
    xi = float(xi)
    if xi == 0.0 and np.all(problem.c == 0.0) and problem.p > 2.0:
        return 0.0
    zeta = oned_grad_wstar(problem, xi)
    params, weights = _unique_cells(problem)
    denom = 0.0
    for pr, w in zip(params, weights):
        h = _pointwise_hess(pr, eval_psi(pr, zeta))
        if h == 0.0:
            return 0.0
        denom += w / h
    return 1.0 / denom
