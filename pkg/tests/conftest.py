"""Shared fixtures and field-building helpers for the test suite."""

import numpy as np
import pytest

from avhomog.randomfield import CoefficientField, DistributionSpec, draw_uniforms, realize_field

TC_DIST_A = DistributionSpec.bernoulli(3.0, 23.0)
TC_DIST_C = {
    "tc1": DistributionSpec.constant(0.0),
    "tc2": DistributionSpec.constant(1.0),
    "tc3": DistributionSpec.bernoulli(1.0, 3.0),
}


def constant_field(half_width, a, c, d=2):
    shape = (half_width,) * d
    return CoefficientField(half_width, d, np.full(shape, float(a)), np.full(shape, float(c)))


def tc_field(test_case, half_width, seed, index):
    draws = draw_uniforms(seed, index, half_width**2)
    return realize_field(TC_DIST_A, TC_DIST_C[test_case], draws, half_width, 2)


def laminate_field(a_columns, c_columns):
    """2D field varying only along the first coordinate."""
    a = np.asarray(a_columns, dtype=float)
    n = a.size
    c = np.asarray(c_columns, dtype=float)
    return CoefficientField(n, 2, np.tile(a[:, None], (1, n)), np.tile(c[:, None], (1, n)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
