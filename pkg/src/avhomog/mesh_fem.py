"""Periodic P1 finite elements on a uniform triangulation of Q_N (2D).

Every grid square is split along the bottom-left to top-right diagonal, so
each triangle lies inside exactly one coefficient cell and all integrands
(P1 gradients, per-cell-constant coefficients) are constant per triangle:
one evaluation per triangle integrates exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import energy


class SolverError(RuntimeError):
    """Linear solve failure (breakdown, stall, or incompatible right-hand side)."""

    def __init__(self, message, kind="failure"):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class PeriodicMesh:
    half_width: int          # N: Q_N = (-N/2, N/2)^2
    h: float
    n_side: int              # nodes per side after periodic identification
    vertices: np.ndarray     # (n_nodes, 2) coordinates of the representatives
    triangles: np.ndarray    # (n_tri, 3) periodic node indices
    tri_grads: np.ndarray    # (n_tri, 3, 2) hat-function gradients per triangle
    tri_cell: np.ndarray     # (n_tri,) flat lattice cell index

    @property
    def n_nodes(self):
        return self.vertices.shape[0]

    @property
    def n_tri(self):
        return self.triangles.shape[0]

    @property
    def area(self):
        return self.h * self.h / 2.0

    @property
    def domain_measure(self):
        return float(self.half_width**2)


def build_mesh(half_width, h, d=2):
    """Structured periodic mesh of (N/h)^2 squares, two triangles each."""
    if d != 2:
        raise ValueError("only d = 2 is supported here")
    if half_width < 1:
        raise ValueError("half_width must be >= 1")
    inv = 1.0 / h
    if abs(inv - round(inv)) > 1e-9:
        raise ValueError(f"1/h must be an integer, got h = {h}")
    m = int(round(inv))
    n = half_width * m
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    v00 = i * n + j
    v10 = ((i + 1) % n) * n + j
    v01 = i * n + (j + 1) % n
    v11 = ((i + 1) % n) * n + (j + 1) % n
    # diagonal from v00 to v11: lower triangle (v00, v10, v11), upper (v00, v11, v01)
    lower = np.stack([v00, v10, v11], axis=-1).reshape(-1, 3)
    upper = np.stack([v00, v11, v01], axis=-1).reshape(-1, 3)
    triangles = np.concatenate([lower, upper], axis=0)

    b_lower = np.array([[-1.0, 0.0], [1.0, -1.0], [0.0, 1.0]]) / h
    b_upper = np.array([[0.0, -1.0], [1.0, 0.0], [-1.0, 1.0]]) / h
    n_sq = n * n
    tri_grads = np.concatenate(
        [np.broadcast_to(b_lower, (n_sq, 3, 2)), np.broadcast_to(b_upper, (n_sq, 3, 2))],
        axis=0,
    ).copy()

    cell = (i // m) * half_width + (j // m)
    tri_cell = np.concatenate([cell.ravel(), cell.ravel()])

    xs = -half_width / 2.0 + h * np.arange(n)
    vertices = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1).reshape(-1, 2)
    return PeriodicMesh(half_width, h, n, vertices, triangles, tri_grads, tri_cell)


def element_gradients(mesh, w):
    """Constant gradient of the P1 interpolant on every triangle, shape (n_tri, 2)."""
    return np.einsum("ta,tad->td", w[mesh.triangles], mesh.tri_grads)


def element_gradient(mesh, w, t):
    """Gradient on one triangle; wrapping across the periodic faces is implicit."""
    return mesh.tri_grads[t].T @ w[mesh.triangles[t]]


def _tri_coefficients(mesh, field_coeffs):
    if field_coeffs.d != 2 or field_coeffs.half_width != mesh.half_width:
        raise ValueError("coefficient field does not match the mesh lattice")
    a = field_coeffs.a_cells.ravel()[mesh.tri_cell]
    c = field_coeffs.c_cells.ravel()[mesh.tri_cell]
    return a, c


def assemble_energy(mesh, field_coeffs, p, xi, w):
    """Cell-averaged energy (1/|Q_N|) sum_t area W(cell(t), xi + grad w_t); exact."""
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = np.asarray(xi, dtype=float)[None, :] + element_gradients(mesh, w)
    return mesh.area * float(energy.w_values(a, c, p, eta).sum()) / mesh.domain_measure


def assemble_residual(mesh, field_coeffs, p, xi, w):
    """First-variation vector: entry i is sum_t area grad(phi_i) . dW(xi + grad w_t)."""
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = np.asarray(xi, dtype=float)[None, :] + element_gradients(mesh, w)
    sigma = energy.grad_values(a, c, p, eta)
    local = mesh.area * np.einsum("tad,td->ta", mesh.tri_grads, sigma)
    res = np.zeros(mesh.n_nodes)
    np.add.at(res, mesh.triangles, local)
    return res


def _scatter_matrix(mesh, local):
    rows = np.broadcast_to(mesh.triangles[:, :, None], local.shape)
    cols = np.broadcast_to(mesh.triangles[:, None, :], local.shape)
    n = mesh.n_nodes
    return sp.coo_matrix(
        (local.ravel(), (rows.ravel(), cols.ravel())), shape=(n, n)
    ).tocsr()


def assemble_hessian(mesh, field_coeffs, p, xi, w):
    """Second-variation matrix; symmetric, constants in the kernel."""
    a, c = _tri_coefficients(mesh, field_coeffs)
    eta = np.asarray(xi, dtype=float)[None, :] + element_gradients(mesh, w)
    hess = energy.hess_values(a, c, p, eta)
    local = mesh.area * np.einsum("tad,tde,tbe->tab", mesh.tri_grads, hess, mesh.tri_grads)
    return _scatter_matrix(mesh, local)


def assemble_scalar_stiffness(mesh, cell_values):
    """Stiffness matrix of the quadratic form int coef |grad v|^2 with per-cell coef."""
    coef = np.asarray(cell_values, dtype=float).ravel()[mesh.tri_cell]
    local = mesh.area * coef[:, None, None] * np.einsum(
        "tad,tbd->tab", mesh.tri_grads, mesh.tri_grads
    )
    return _scatter_matrix(mesh, local)


def assemble_macro_load(mesh, cell_values, xi):
    """Load vector with entries sum_t area coef grad(phi_i) . xi."""
    coef = np.asarray(cell_values, dtype=float).ravel()[mesh.tri_cell]
    local = mesh.area * coef[:, None] * (mesh.tri_grads @ np.asarray(xi, dtype=float))
    load = np.zeros(mesh.n_nodes)
    np.add.at(load, mesh.triangles, local)
    return load


def solve_spd(matrix, rhs, rtol=1e-10, method="auto"):
    """Zero-mean solution of the singular SPD system on the zero-mean subspace.

    The matrix kernel contains the constants, so the right-hand side must be
    (numerically) orthogonal to them.  A sparse factorization of the
    one-node-pinned system is tried first; preconditioned CG with mean
    projection is the fallback backend behind the same contract.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.size
    nrm = float(np.linalg.norm(rhs))
    if nrm == 0.0:
        return np.zeros(n)
    if abs(float(rhs.sum())) / np.sqrt(n) > 1e-8 * nrm:
        raise SolverError("rhs has a component along constants", kind="incompatible")
    b = rhs - rhs.mean()

    if method in ("auto", "direct"):
        x = _try_direct(matrix, b, rtol)
        if x is not None:
            return x
        if method == "direct":
            raise SolverError("direct factorization failed", kind="breakdown")
    return _solve_pcg(matrix, b, rtol)


def _try_direct(matrix, b, rtol):
    try:
        reduced = matrix[1:, 1:].tocsc()
        lu = spla.splu(reduced)
        x = np.zeros(b.size)
        x[1:] = lu.solve(b[1:])
    except Exception:
        return None
    if not np.all(np.isfinite(x)):
        return None
    resid = matrix @ x - b
    if np.linalg.norm(resid) > rtol * np.linalg.norm(b):
        return None
    return x - x.mean()


def _solve_pcg(matrix, b, rtol):
    n = b.size
    diag = matrix.diagonal()
    if np.any(diag <= 0.0):
        raise SolverError("nonpositive diagonal entry", kind="breakdown")
    x = np.zeros(n)
    r = b.copy()
    z = r / diag
    z -= z.mean()
    p_vec = z.copy()
    rz = float(r @ z)
    b_nrm = float(np.linalg.norm(b))
    max_iter = int(50 * np.sqrt(n)) + 10
    for _ in range(max_iter):
        if np.linalg.norm(r) <= rtol * b_nrm:
            return x - x.mean()
        ap = matrix @ p_vec
        pap = float(p_vec @ ap)
        if pap <= 0.0:
            raise SolverError("conjugate gradient breakdown", kind="breakdown")
        alpha = rz / pap
        x += alpha * p_vec
        r -= alpha * ap
        r -= r.mean()
        z = r / diag
        z -= z.mean()
        rz_new = float(r @ z)
        p_vec = z + (rz_new / rz) * p_vec
        rz = rz_new
    if np.linalg.norm(r) <= rtol * b_nrm:
        return x - x.mean()
    raise SolverError("conjugate gradient stalled", kind="stall")


def dump_mesh(mesh):
    """Plain-text mesh dump: 'node x y' then 'tri i j k' rows."""
    lines = [f"node {float(v[0])!r} {float(v[1])!r}" for v in mesh.vertices]
    lines += [f"tri {t[0]} {t[1]} {t[2]}" for t in mesh.triangles]
    return "\n".join(lines) + "\n"
