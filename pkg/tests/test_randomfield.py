"""Checkerboard field generation, inverse CDFs, and antithetic draws."""

import numpy as np
import pytest
from scipy.stats import binomtest

from avhomog.randomfield import (
    CoefficientField,
    DistributionSpec,
    UniformDraws,
    antithetic,
    draw_uniforms,
    dump_field,
    inverse_cdf,
    realize_field,
)


def test_distribution_spec_validation():
    DistributionSpec.constant(1.0)
    DistributionSpec.bernoulli(3.0, 23.0)
    with pytest.raises(ValueError):
        DistributionSpec("uniform", 0.0, 1.0)
    with pytest.raises(ValueError):
        DistributionSpec.bernoulli(5.0, 5.0)


def test_inverse_cdf_examples():
    bern = DistributionSpec.bernoulli(3.0, 23.0)
    assert inverse_cdf(bern, 0.25) == 3.0
    assert inverse_cdf(bern, 0.75) == 23.0
    assert inverse_cdf(DistributionSpec.constant(1.0), 0.99) == 1.0
    assert inverse_cdf(bern, 0.5) == 23.0   # tie goes to the upper value


def test_inverse_cdf_rejects_out_of_range():
    bern = DistributionSpec.bernoulli(3.0, 23.0)
    with pytest.raises(ValueError):
        inverse_cdf(bern, -0.01)
    with pytest.raises(ValueError):
        inverse_cdf(bern, 1.01)


def test_inverse_cdf_non_decreasing():
    grid = np.linspace(0.0, 1.0, 101)
    for spec in (DistributionSpec.bernoulli(3.0, 23.0), DistributionSpec.constant(2.0)):
        vals = inverse_cdf(spec, grid)
        assert np.all(np.diff(vals) >= 0.0)


def test_draws_deterministic_and_distinct():
    d1 = draw_uniforms(7, 3, 25)
    d2 = draw_uniforms(7, 3, 25)
    np.testing.assert_array_equal(d1.u_a, d2.u_a)
    np.testing.assert_array_equal(d1.u_c, d2.u_c)
    d3 = draw_uniforms(1, 0, 25)
    d4 = draw_uniforms(1, 1, 25)
    assert np.any(d3.u_a != d4.u_a)


def test_draws_independent_of_order():
    # counter-based scheme: drawing index 5 first or last changes nothing
    late = draw_uniforms(0, 5, 16)
    for idx in range(5):
        draw_uniforms(0, idx, 16)
    early = draw_uniforms(0, 5, 16)
    np.testing.assert_array_equal(late.u_a, early.u_a)
    np.testing.assert_array_equal(late.u_c, early.u_c)


def test_draws_empirical_mean():
    d = draw_uniforms(0, 0, 500_000)
    values = np.concatenate([d.u_a, d.u_c])
    assert abs(values.mean() - 0.5) < 0.002   # 3 sigma / sqrt(1e6) with var 1/12


def test_draws_validation():
    with pytest.raises(ValueError):
        draw_uniforms(0, 0, 0)
    with pytest.raises(ValueError):
        UniformDraws(0, 0, np.array([0.5, 1.5]), np.array([0.5, 0.5]))


def test_antithetic_examples():
    d = UniformDraws(0, 0, np.array([0.25, 0.75]), np.array([0.5, 0.1]))
    anti = antithetic(d)
    np.testing.assert_array_equal(anti.u_a, [0.75, 0.25])
    np.testing.assert_array_equal(anti.u_c, [0.5, 0.9])
    assert anti.antithetic and not d.antithetic


def test_antithetic_involution_on_fields():
    spec_a = DistributionSpec.bernoulli(3.0, 23.0)
    spec_c = DistributionSpec.bernoulli(1.0, 3.0)
    draws = draw_uniforms(11, 4, 25)
    twice = antithetic(antithetic(draws))
    f1 = realize_field(spec_a, spec_c, draws, 5, 2)
    f2 = realize_field(spec_a, spec_c, twice, 5, 2)
    np.testing.assert_array_equal(f1.a_cells, f2.a_cells)
    np.testing.assert_array_equal(f1.c_cells, f2.c_cells)
    assert not twice.antithetic


def test_realize_field_examples():
    spec_a = DistributionSpec.bernoulli(3.0, 23.0)
    spec_c = DistributionSpec.constant(0.0)
    n = 4
    draws = UniformDraws(0, 0, np.full(n, 0.1), np.full(n, 0.1))
    field = realize_field(spec_a, spec_c, draws, 2, 2)
    assert np.all(field.a_cells == 3.0) and np.all(field.c_cells == 0.0)
    anti_field = realize_field(spec_a, spec_c, antithetic(draws), 2, 2)
    assert np.all(anti_field.a_cells == 23.0)


def test_realize_field_fraction():
    spec_a = DistributionSpec.bernoulli(3.0, 23.0)
    spec_c = DistributionSpec.constant(0.0)
    field = realize_field(spec_a, spec_c, draw_uniforms(0, 0, 10_000), 100, 2)
    frac = np.mean(field.a_cells == 23.0)
    assert abs(frac - 0.5) < 0.015   # binomial 3 sigma bound


def test_realize_field_size_mismatch():
    spec = DistributionSpec.constant(1.0)
    with pytest.raises(ValueError):
        realize_field(spec, spec, draw_uniforms(0, 0, 9), 2, 2)


def test_equal_law_of_antithetic_fields():
    # per-cell hi counts of both arms are Binomial(M, 1/2)
    spec_a = DistributionSpec.bernoulli(3.0, 23.0)
    spec_c = DistributionSpec.constant(0.0)
    n_reals, hw = 10_000, 2
    plain = np.zeros(hw * hw)
    anti = np.zeros(hw * hw)
    for m in range(n_reals):
        draws = draw_uniforms(3, m, hw * hw)
        plain += (realize_field(spec_a, spec_c, draws, hw, 2).a_cells.ravel() == 23.0)
        anti += (realize_field(spec_a, spec_c, antithetic(draws), hw, 2).a_cells.ravel() == 23.0)
    for counts in (plain, anti):
        for k in counts:
            assert binomtest(int(k), n_reals, 0.5).pvalue > 1e-3


def test_monotone_structure(rng):
    spec_a = DistributionSpec.bernoulli(3.0, 23.0)
    spec_c = DistributionSpec.bernoulli(1.0, 3.0)
    for _ in range(20):
        base = draw_uniforms(rng.integers(1 << 30), 0, 9)
        k = rng.integers(9)
        u_a = base.u_a.copy()
        u_a[k] = min(1.0, u_a[k] + rng.uniform(0.0, 1.0))
        bumped = UniformDraws(0, 0, u_a, base.u_c.copy())
        f0 = realize_field(spec_a, spec_c, base, 3, 2)
        f1 = realize_field(spec_a, spec_c, bumped, 3, 2)
        assert np.all(f1.a_cells >= f0.a_cells)
        np.testing.assert_array_equal(f1.c_cells, f0.c_cells)


def test_coefficient_field_validation():
    with pytest.raises(ValueError):
        CoefficientField(2, 2, np.zeros((2, 2)), np.zeros((2, 2)))   # a must be > 0
    with pytest.raises(ValueError):
        CoefficientField(2, 2, np.ones((3, 2)), np.zeros((3, 2)))    # bad shape


def test_dump_field_format():
    field = CoefficientField(
        2, 2, np.array([[3.0, 23.0], [3.0, 3.0]]), np.array([[0.0, 1.0], [0.0, 0.0]])
    )
    lines = dump_field(field).strip().split("\n")
    assert len(lines) == 4
    k1, k2, a, c = lines[1].split()
    assert (int(k1), int(k2)) == (0, 1)
    assert float(a) == 23.0 and float(c) == 1.0
