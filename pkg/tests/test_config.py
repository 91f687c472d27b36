"""Flat key-value configuration parsing and validation."""

import pytest

from avhomog.config import ConfigError, ExperimentConfig, parse_config
from avhomog.randomfield import DistributionSpec


def _write(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_minimal_file_fills_defaults(tmp_path):
    cfg = parse_config(_write(tmp_path, "test_case = tc1\nseed = 42\n"))
    assert cfg.test_case == "tc1"
    assert cfg.seed == 42
    assert cfg.p == 4.0 and cfg.d == 2
    assert cfg.xi == (1.0, 1.0)
    assert cfg.sizes == (10, 20, 40)
    assert cfg.samples_2m == 100
    assert cfg.mesh_h == 0.2
    assert cfg.newton_tol == 1e-5
    assert cfg.dist_a == DistributionSpec.bernoulli(3.0, 23.0)
    assert cfg.dist_c == DistributionSpec.constant(0.0)


def test_dist_c_defaults_follow_test_case():
    assert ExperimentConfig(test_case="tc2").dist_c == DistributionSpec.constant(1.0)
    assert ExperimentConfig(test_case="tc3").dist_c == DistributionSpec.bernoulli(1.0, 3.0)


def test_sizes_override(tmp_path):
    cfg = parse_config(_write(tmp_path, "test_case = tc1\nsizes = [10, 20]\n"))
    assert cfg.sizes == (10, 20)


def test_comments_and_blank_lines(tmp_path):
    text = "# experiment\n\ntest_case = tc2   # with quadratic term\nseed = 1\n"
    assert parse_config(_write(tmp_path, text)).test_case == "tc2"


def test_explicit_distributions(tmp_path):
    text = "test_case = custom\ndist_a = bernoulli(2, 7)\ndist_c = constant(0.5)\n"
    cfg = parse_config(_write(tmp_path, text))
    assert cfg.dist_a == DistributionSpec.bernoulli(2.0, 7.0)
    assert cfg.dist_c == DistributionSpec.constant(0.5)


@pytest.mark.parametrize(
    "line",
    [
        "mesh_h = 0.3",
        "sizes = [9, 20]",
        "sizes = [0]",
        "samples_2m = 7",
        "samples_2m = 0",
        "d = 3",
        "p = 1.5",
        "newton_tol = 0",
        "seed = -1",
        "test_case = tc9",
        "dist_a = uniform(0, 1)",
        "dist_a = bernoulli(5, 5)",
        "frobnicate = 1",
    ],
)
def test_invalid_values_rejected(tmp_path, line):
    with pytest.raises(ConfigError):
        parse_config(_write(tmp_path, f"test_case = tc1\n{line}\n"))


def test_duplicate_key_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(_write(tmp_path, "seed = 1\nseed = 2\n"))


def test_malformed_line_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(_write(tmp_path, "just some words\n"))


def test_to_dict_roundtrips_key_fields():
    d = ExperimentConfig(test_case="tc3", seed=9).to_dict()
    assert d["test_case"] == "tc3"
    assert d["seed"] == 9
    assert d["dist_c"] == "bernoulli(1.0, 3.0)"
    assert d["sizes"] == [10, 20, 40]
