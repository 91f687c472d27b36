"""Checkerboard coefficient fields on Q_N built from uniform draws.

Each unit lattice cell carries one (a, c) pair obtained by pushing
independent uniforms through monotone inverse CDFs.  The antithetic
companion of a draw U is 1 - U, channel-wise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DistributionSpec:
    """Cell-value distribution: a point mass or a fair two-point (Bernoulli) law."""

    kind: str
    lo: float
    hi: float

    def __post_init__(self):
        if self.kind not in ("constant", "bernoulli"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "bernoulli" and not self.lo < self.hi:
            raise ValueError("bernoulli requires lo < hi")

    @staticmethod
    def constant(v):
        return DistributionSpec("constant", float(v), float(v))

    @staticmethod
    def bernoulli(lo, hi):
        return DistributionSpec("bernoulli", float(lo), float(hi))


def inverse_cdf(spec, x):
    """Monotone map sending a uniform in [0, 1] to a cell value.

    Bernoulli assigns the lower value on [0, 1/2) and the upper value on
    [1/2, 1]; the tie at exactly 1/2 goes to the upper value.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("uniform values must lie in [0, 1]")
    if spec.kind == "constant":
        out = np.full_like(arr, spec.lo)
    else:
        out = np.where(arr < 0.5, spec.lo, spec.hi)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class UniformDraws:
    """One realization's uniforms: one channel for a, one for c."""

    seed: int
    realization_index: int
    u_a: np.ndarray
    u_c: np.ndarray
    antithetic: bool = False

    def __post_init__(self):
        if self.u_a.shape != self.u_c.shape or self.u_a.ndim != 1:
            raise ValueError("channels must be 1D arrays of equal length")
        for u in (self.u_a, self.u_c):
            if np.any(u < 0.0) or np.any(u > 1.0):
                raise ValueError("uniform values must lie in [0, 1]")

    @property
    def n_cells(self):
        return self.u_a.size


def draw_uniforms(seed, realization_index, n_cells):
    """Deterministic uniforms for one realization.

    Counter-based (Philox) generation keyed by (seed, realization_index):
    any tuple yields the same values regardless of evaluation order or
    thread scheduling.
    """
    if n_cells < 1:
        raise ValueError("n_cells must be >= 1")
    key = np.array([seed, realization_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    u = rng.random(2 * n_cells)
    return UniformDraws(seed, realization_index, u[:n_cells], u[n_cells:])


def antithetic(draws):
    """Companion draws with every value v replaced by 1 - v."""
    return UniformDraws(
        draws.seed,
        draws.realization_index,
        1.0 - draws.u_a,
        1.0 - draws.u_c,
        not draws.antithetic,
    )


@dataclass(frozen=True)
class CoefficientField:
    """Per-unit-cell (a, c) values on Q_N = (-N/2, N/2)^d, N cells per side."""

    half_width: int
    d: int
    a_cells: np.ndarray
    c_cells: np.ndarray

    def __post_init__(self):
        shape = (self.half_width,) * self.d
        if self.a_cells.shape != shape or self.c_cells.shape != shape:
            raise ValueError(f"cell arrays must have shape {shape}")
        if np.any(self.a_cells <= 0.0):
            raise ValueError("a values must be > 0")
        if np.any(self.c_cells < 0.0):
            raise ValueError("c values must be >= 0")

    @property
    def n_cells(self):
        return self.a_cells.size


def realize_field(spec_a, spec_c, draws, half_width, d=2):
    """Push one channel of uniforms per coefficient through the inverse CDFs."""
    n_cells = half_width**d
    if draws.n_cells != n_cells:
        raise ValueError(
            f"draws carry {draws.n_cells} cells but the lattice needs {n_cells}"
        )
    shape = (half_width,) * d
    a_cells = inverse_cdf(spec_a, draws.u_a).reshape(shape)
    c_cells = inverse_cdf(spec_c, draws.u_c).reshape(shape)
    return CoefficientField(half_width, d, a_cells, c_cells)


def dump_field(field):
    """Plain-text dump, one row per cell in lexicographic order: indices, a, c."""
    lines = []
    for idx in np.ndindex(field.a_cells.shape):
        coords = " ".join(str(k) for k in idx)
        lines.append(f"{coords} {float(field.a_cells[idx])!r} {float(field.c_cells[idx])!r}")
    return "\n".join(lines) + "\n"
