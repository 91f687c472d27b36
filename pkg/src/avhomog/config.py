"""Flat key-value experiment configuration with typed validation."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .randomfield import DistributionSpec


class ConfigError(ValueError):
    pass


TEST_CASES = ("tc1", "tc2", "tc3", "custom")

_DEFAULT_DIST_C = {
    "tc1": DistributionSpec.constant(0.0),
    "tc2": DistributionSpec.constant(1.0),
    "tc3": DistributionSpec.bernoulli(1.0, 3.0),
    "custom": DistributionSpec.constant(0.0),
}


@dataclass
class ExperimentConfig:
    test_case: str = "tc1"
    p: float = 4.0
    d: int = 2
    xi: tuple = (1.0, 1.0)
    sizes: tuple = (10, 20, 40)      # values of 2N
    samples_2m: int = 100
    mesh_h: float = 0.2
    newton_tol: float = 1e-5
    seed: int = 0
    dist_a: DistributionSpec = field(default_factory=lambda: DistributionSpec.bernoulli(3.0, 23.0))
    dist_c: DistributionSpec = None
    output_dir: str = "results"

    def __post_init__(self):
        if self.test_case not in TEST_CASES:
            raise ConfigError(f"test_case must be one of {TEST_CASES}")
        if self.dist_c is None:
            self.dist_c = _DEFAULT_DIST_C[self.test_case]
        if self.d != 2:
            raise ConfigError("d must be 2")
        if not self.p >= 2.0:
            raise ConfigError("p must be >= 2")
        if len(self.xi) != 2:
            raise ConfigError("xi must have 2 components")
        if not self.sizes:
            raise ConfigError("sizes must be non-empty")
        for s in self.sizes:
            if s < 2 or s % 2 != 0:
                raise ConfigError(f"sizes entries must be even and >= 2, got {s}")
        inv = 1.0 / self.mesh_h
        if abs(inv - round(inv)) > 1e-9:
            raise ConfigError(f"1/mesh_h must be an integer, got mesh_h = {self.mesh_h}")
        if self.samples_2m < 2 or self.samples_2m % 2 != 0:
            raise ConfigError("samples_2m must be even and >= 2")
        if not self.newton_tol > 0.0:
            raise ConfigError("newton_tol must be > 0")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")

    def to_dict(self):
        return {
            "test_case": self.test_case,
            "p": self.p,
            "d": self.d,
            "xi": list(self.xi),
            "sizes": list(self.sizes),
            "samples_2m": self.samples_2m,
            "mesh_h": self.mesh_h,
            "newton_tol": self.newton_tol,
            "seed": self.seed,
            "dist_a": _dist_str(self.dist_a),
            "dist_c": _dist_str(self.dist_c),
            "output_dir": self.output_dir,
        }


def _dist_str(spec):
    if spec.kind == "constant":
        return f"constant({spec.lo})"
    return f"bernoulli({spec.lo}, {spec.hi})"


def _parse_dist(text, key):
    match = re.fullmatch(r"(constant|bernoulli)\s*\(([^)]*)\)", text.strip())
    if not match:
        raise ConfigError(f"{key}: expected constant(v) or bernoulli(lo, hi), got {text!r}")
    kind, args = match.group(1), [s for s in match.group(2).split(",") if s.strip()]
    try:
        vals = [float(s) for s in args]
    except ValueError as exc:
        raise ConfigError(f"{key}: bad number in {text!r}") from exc
    try:
        if kind == "constant":
            if len(vals) != 1:
                raise ConfigError(f"{key}: constant takes one value")
            return DistributionSpec.constant(vals[0])
        if len(vals) != 2:
            raise ConfigError(f"{key}: bernoulli takes two values")
        return DistributionSpec.bernoulli(vals[0], vals[1])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _parse_numbers(text, key, cast):
    items = [s for s in re.split(r"[,\s]+", text.strip().strip("[]()")) if s]
    try:
        return tuple(cast(s) for s in items)
    except ValueError as exc:
        raise ConfigError(f"{key}: bad value {text!r}") from exc


def _parse_scalar(text, key, cast):
    try:
        return cast(text.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: bad value {text!r}") from exc


_PARSERS = {
    "test_case": lambda v: v.strip(),
    "p": lambda v: _parse_scalar(v, "p", float),
    "d": lambda v: _parse_scalar(v, "d", int),
    "xi": lambda v: _parse_numbers(v, "xi", float),
    "sizes": lambda v: _parse_numbers(v, "sizes", int),
    "samples_2m": lambda v: _parse_scalar(v, "samples_2m", int),
    "mesh_h": lambda v: _parse_scalar(v, "mesh_h", float),
    "newton_tol": lambda v: _parse_scalar(v, "newton_tol", float),
    "seed": lambda v: _parse_scalar(v, "seed", int),
    "dist_a": lambda v: _parse_dist(v, "dist_a"),
    "dist_c": lambda v: _parse_dist(v, "dist_c"),
    "output_dir": lambda v: v.strip(),
}


def parse_config(path):
    """Read a flat 'key = value' file; unknown keys are rejected."""
    fields = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in fields:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            fields[key] = _PARSERS[key](value)
    try:
        return ExperimentConfig(**fields)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
