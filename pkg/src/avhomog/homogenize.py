"""Per-realization homogenized outputs from a converged corrector.

The value is the cell-averaged energy at the corrector; the gradient is the
cell average of the pointwise flux (no corrector sensitivity needed); the
Hessian uses the symmetric sandwich form built from the corrector
sensitivities g_j = dw/dxi_j, which makes it symmetric PSD by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import energy
from .mesh_fem import (
    SolverError,
    assemble_energy,
    assemble_hessian,
    element_gradients,
    solve_spd,
    _tri_coefficients,
)
from .newton import NewtonConfig, initial_guess, regularized, solve_corrector


class PipelineError(RuntimeError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage


@dataclass(frozen=True)
class HomogenizedOutputs:
    xi: np.ndarray
    value: float
    grad: np.ndarray          # (2,)
    hess: np.ndarray          # (2, 2)
    axial_first: float        # xi . grad
    axial_second: float       # xi^T hess xi


def _require_converged(corrector):
    if not corrector.converged:
        raise ValueError("corrector did not converge")


def homogenized_value(mesh, field_coeffs, p, xi, corrector):
    """Cell-averaged minimal energy for this realization."""
    _require_converged(corrector)
    return assemble_energy(mesh, field_coeffs, p, xi, corrector.w)


def homogenized_gradient(mesh, field_coeffs, p, xi, corrector):
    """Cell average of the pointwise flux at xi + grad w."""
    _require_converged(corrector)
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = np.asarray(xi, dtype=float)[None, :] + element_gradients(mesh, corrector.w)
    sigma = energy.grad_values(a, c, p, eta)
    return mesh.area * sigma.sum(axis=0) / mesh.domain_measure


def corrector_sensitivities(mesh, field_coeffs, p, xi, corrector):
    """The fields g_j = dw/dxi_j, zero-mean solutions of the linearized problems."""
    _require_converged(corrector)
    xi = np.asarray(xi, dtype=float)
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = xi[None, :] + element_gradients(mesh, corrector.w)
    hess_t = energy.hess_values(a, c, p, eta)
    matrix = assemble_hessian(mesh, field_coeffs, p, xi, corrector.w)
    sensitivities = []
    for j in range(xi.size):
        local = mesh.area * np.einsum("tad,td->ta", mesh.tri_grads, hess_t[:, :, j])
        load = np.zeros(mesh.n_nodes)
        np.add.at(load, mesh.triangles, local)
        load -= load.mean()   # sums to zero analytically; strip roundoff
        try:
            g = solve_spd(matrix, -load)
        except SolverError:
            matrix = regularized(matrix, mesh, field_coeffs)
            g = solve_spd(matrix, -load)
        sensitivities.append(g)
    return sensitivities


def homogenized_hessian(mesh, field_coeffs, p, xi, corrector, sensitivities):
    """Symmetric sandwich (Id + G) d2W (Id + G)^T averaged over the cell.

    Row j of the per-triangle matrix G holds the gradient of g_j, so the
    j-th row of Id + G is e_j + grad g_j.
    """
    _require_converged(corrector)
    xi = np.asarray(xi, dtype=float)
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = xi[None, :] + element_gradients(mesh, corrector.w)
    hess_t = energy.hess_values(a, c, p, eta)
    rows = np.stack([element_gradients(mesh, g) for g in sensitivities], axis=1)
    factor = np.eye(xi.size)[None, :, :] + rows
    sandwich = np.einsum("tjd,tde,tke->tjk", factor, hess_t, factor)
    return mesh.area * sandwich.sum(axis=0) / mesh.domain_measure


def full_pipeline(field_coeffs, p, xi, mesh, cfg=None):
    """Initial guess, Newton solve, then all homogenized outputs.

    Returns (outputs, corrector_state); stage failures are re-raised with the
    failing stage identified.
    """
    cfg = cfg or NewtonConfig()
    xi = np.asarray(xi, dtype=float)
    try:
        w0 = initial_guess(mesh, field_coeffs, xi)
    except SolverError as exc:
        raise PipelineError("initial_guess", exc) from exc
    try:
        state = solve_corrector(mesh, field_coeffs, p, xi, cfg, w0=w0)
    except SolverError as exc:
        raise PipelineError("corrector", exc) from exc
    if not state.converged:
        raise PipelineError("corrector", "Newton did not converge")
    value = homogenized_value(mesh, field_coeffs, p, xi, state)
    grad = homogenized_gradient(mesh, field_coeffs, p, xi, state)
    try:
        sens = corrector_sensitivities(mesh, field_coeffs, p, xi, state)
    except SolverError as exc:
        raise PipelineError("sensitivities", exc) from exc
    hess = homogenized_hessian(mesh, field_coeffs, p, xi, state, sens)
    outputs = HomogenizedOutputs(
        xi=xi,
        value=value,
        grad=grad,
        hess=hess,
        axial_first=float(xi @ grad),
        axial_second=float(xi @ hess @ xi),
    )
    return outputs, state
