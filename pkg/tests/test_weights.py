import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.stats import norm

from wden import (
    ConfigurationError,
    DensityEstimate,
    EmpiricalCdf,
    Pgf,
    SingularWeightError,
    WeightSpec,
    ecdf_eval,
    make_grid,
    parse_weight,
    pileup_weight,
    plug_in,
    weight_eval,
)
from wden.weights import weight_integral

FAMILIES = (
    [WeightSpec.degenerate(m) for m in range(1, 11)]
    + [WeightSpec.order_statistic(m, j) for m in range(1, 7) for j in range(1, m + 1)]
    + [WeightSpec.geometric(e) for e in (0.1, 0.5, 0.9)]
    + [WeightSpec.poisson_plus_one(l) for l in (0.5, 1.0, 4.0)]
    + [WeightSpec.pileup(Pgf.geometric(0.5)), WeightSpec.pileup(Pgf.degenerate(2))]
)


def test_ecdf_examples():
    cdf = EmpiricalCdf([1.0, 2.0, 3.0])
    assert ecdf_eval(cdf, 0.5) == 0.0
    assert ecdf_eval(cdf, 3.0) == 1.0
    assert ecdf_eval(cdf, 7.0) == 1.0
    assert ecdf_eval(cdf, 2.0) == pytest.approx(2 / 3)
    assert cdf.n == 3


def test_ecdf_ties_right_continuous():
    cdf = EmpiricalCdf([1.0, 1.0, 2.0, 2.0])
    assert_allclose(cdf(np.array([1.0 - 1e-12, 1.0, 1.5, 2.0])), [0.0, 0.5, 0.5, 1.0])


@settings(max_examples=50, deadline=None)
@given(data=st.lists(st.floats(-100, 100), min_size=1, max_size=50), x=st.floats(-200, 200))
def test_ecdf_matches_direct_count(data, x):
    assert ecdf_eval(EmpiricalCdf(data), x) == sum(v <= x for v in data) / len(data)


def test_weight_examples():
    assert weight_eval(WeightSpec.degenerate(2), 0.5) == pytest.approx(1.0)
    assert weight_eval(WeightSpec.geometric(0.5), 1.0) == pytest.approx(2.0)
    assert weight_eval(WeightSpec.poisson_plus_one(1.0), 0.0) == pytest.approx(math.exp(-1), abs=1e-12)
    assert weight_eval(WeightSpec.order_statistic(3, 2), 0.5) == pytest.approx(1.5)


def test_weight_domain():
    with pytest.raises(ConfigurationError):
        weight_eval(WeightSpec.degenerate(2), 1.5)
    with pytest.raises(ConfigurationError):
        weight_eval(WeightSpec.degenerate(2), np.array([0.2, -0.1]))


def test_weight_parameter_validation():
    with pytest.raises(ConfigurationError):
        WeightSpec.degenerate(0)
    with pytest.raises(ConfigurationError):
        WeightSpec.order_statistic(3, 4)
    with pytest.raises(ConfigurationError):
        WeightSpec.geometric(1.5)
    with pytest.raises(ConfigurationError):
        WeightSpec.poisson_plus_one(-1.0)


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.label)
def test_normalization(spec):
    assert weight_integral(spec) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("eta", [0.1, 0.5, 0.9])
def test_geometric_matches_truncated_series(eta):
    u = np.linspace(0, 0.99, 100)
    k = np.arange(1, 10_001)[:, None]
    series = np.sum(k * u ** (k - 1) * eta * (1 - eta) ** (k - 1), axis=0)
    assert_allclose(weight_eval(WeightSpec.geometric(eta), u), series, atol=1e-8)


def test_pileup_identity_pgf():
    u = np.linspace(0, 1, 11)
    assert_allclose(pileup_weight(Pgf.degenerate(1), u), 1.0, atol=1e-10)


@pytest.mark.parametrize("eta", [0.2, 0.5, 0.8])
def test_pileup_geometric_closed_form(eta):
    u = np.linspace(0, 1, 201)
    v = (1 - u) / (eta + (1 - eta) * (1 - u))
    expected = (1 - (1 - eta) * v) ** 2 / eta
    assert_allclose(pileup_weight(Pgf.geometric(eta), u), expected, atol=1e-9)
    assert pileup_weight(Pgf.geometric(0.5), 0.0) == pytest.approx(0.5, abs=1e-9)


def test_pileup_two_copies():
    assert pileup_weight(Pgf.degenerate(2), 0.0) == pytest.approx(0.5, abs=1e-9)
    assert_allclose(pileup_weight(Pgf.degenerate(2), np.array([0.19, 0.75])), [1 / 1.8, 1.0], atol=1e-9)
    with pytest.raises(SingularWeightError):
        pileup_weight(Pgf.degenerate(2), 1.0)


def test_pgf_from_masses_matches_closed_form():
    pgf = Pgf.from_masses([0.3, 0.7])  # P(N=1), P(N=2)
    u = np.linspace(0, 1, 5)
    assert_allclose(pgf.M(u), 0.3 * u + 0.7 * u**2)
    assert_allclose(pgf.dM(u), 0.3 + 1.4 * u)
    with pytest.raises(ConfigurationError):
        Pgf.from_masses([0.5, 0.4])


def test_poisson_pgf_derivative():
    pgf = Pgf.poisson_plus_one(1.5)
    u = np.linspace(0.1, 0.9, 9)
    numeric = (pgf.M(u + 1e-6) - pgf.M(u - 1e-6)) / 2e-6
    assert_allclose(pgf.dM(u), numeric, rtol=1e-7)


def test_plug_in_identity_weight(rng):
    x = rng.normal(size=100)
    grid = make_grid(6, 4.0)
    f = DensityEstimate(grid, rng.random(grid.size))
    g = plug_in(f, EmpiricalCdf(x), WeightSpec.degenerate(1))
    assert np.array_equal(g.values, f.values)
    zero = DensityEstimate(grid, np.zeros(grid.size))
    assert np.all(plug_in(zero, EmpiricalCdf(x), WeightSpec.geometric(0.3)).values == 0)


def test_dkw_band(rng):
    n, delta = 500, 0.01
    eps = math.sqrt(math.log(2 / delta) / (2 * n))
    failures = 0
    for _ in range(200):
        x = np.sort(rng.normal(size=n))
        F = norm.cdf(x)
        i = np.arange(1, n + 1)
        sup = max(np.max(i / n - F), np.max(F - (i - 1) / n))
        failures += sup > eps
    assert failures <= 2


@pytest.mark.parametrize("text,label", [
    ("geometric:0.9", "geometric:0.9"),
    ("degenerate:2", "degenerate:2"),
    ("order:3:2", "order:3:2"),
    ("poisson+1:1", "poisson+1:1"),
])
def test_parse_weight_round_trip(text, label):
    spec = parse_weight(text)
    assert spec.label == label
    assert parse_weight(spec.label) == spec


def test_parse_pileup():
    spec = parse_weight("pileup:geometric:0.5")
    assert spec.kind == "pileup"
    assert weight_eval(spec, 0.0) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("bad", ["", "geometric", "geometric:x", "order:3", "beta:2", "pileup:nope:1"])
def test_parse_weight_errors(bad):
    with pytest.raises(ConfigurationError):
        parse_weight(bad)


@settings(max_examples=50, deadline=None)
@given(u=st.floats(0, 1), spec=st.sampled_from(FAMILIES[:-1]))
def test_weights_nonnegative(u, spec):
    assert weight_eval(spec, u) >= 0.0
