import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import cumulative_trapezoid, quad
from scipy.stats import kstest

from wden import (
    ConfigurationError,
    MixtureModel,
    NSpec,
    WeightSpec,
    make_model,
    model_cdf,
    model_pdf,
    replication_stream,
    sample_max_of_N,
    sample_model,
    true_g,
)
from wden.testbed import MODEL_NAMES, rescale, sample_counts

MIXTURES = ["separatedbimodal", "kurtotic", "stronglyskewed"]
NSPECS = [NSpec("degenerate", 1), NSpec("degenerate", 2), NSpec("geometric", 0.1), NSpec("geometric", 0.5),
          NSpec("geometric", 0.9), NSpec("poisson+1", 0.5), NSpec("poisson+1", 1.0), NSpec("poisson+1", 4.0)]
SPECS = [n.weight() for n in NSPECS] + [WeightSpec.order_statistic(4, 2), WeightSpec.order_statistic(3, 3)]


def _unscaled(components):
    lo = min(m - 3 * s for _, m, s in components)
    hi = max(m + 3 * s for _, m, s in components)
    return lo, hi


def test_kurtotic_transcription():
    m = make_model("Kurtotic")
    expected = rescale(((2 / 3, 0.0, 1.0), (1 / 3, 0.0, 0.1)))
    assert_allclose(np.array(m.components), np.array(expected), rtol=0, atol=0)
    assert_allclose(m.weights, [2 / 3, 1 / 3])
    # rescaling fixes the envelope; sigma ratio 10 : 1 is preserved
    assert m.sigmas[0] / m.sigmas[1] == pytest.approx(10.0)
    assert_allclose(m.sigmas[0], 1.0, atol=1e-15)


def test_separated_bimodal_is_already_on_envelope():
    m = make_model("SeparatedBimodal")
    assert_allclose(np.array(m.components), [[0.5, -1.5, 0.5], [0.5, 1.5, 0.5]], atol=1e-15)


def test_strongly_skewed_transcription():
    m = make_model("strongly-skewed")
    raw = [(1 / 8, 3 * ((2 / 3) ** l - 1), (2 / 3) ** l) for l in range(8)]
    lo, hi = _unscaled(raw)
    a = 6.0 / (hi - lo)
    c = -3.0 - a * lo
    assert_allclose(m.mus, [a * mu + c for _, mu, _ in raw], atol=1e-13)
    assert_allclose(m.sigmas, [a * s for _, _, s in raw], atol=1e-13)


@pytest.mark.parametrize("name", MIXTURES)
def test_envelope_after_rescaling(name):
    m = make_model(name)
    assert np.min(m.mus - 3 * m.sigmas) == pytest.approx(-3.0, abs=1e-12)
    assert np.max(m.mus + 3 * m.sigmas) == pytest.approx(3.0, abs=1e-12)
    assert m.weights.sum() == pytest.approx(1.0, abs=1e-12)


def _line_integral(fn, name):
    # whole-line quadrature; mixture tails beyond |x| = 12 are below 1e-30
    points = [-1.0, 1.0] if name == "uniform" else [-3.0, 0.0, 3.0]
    return quad(lambda t: float(fn(t)), -12.0, 12.0, limit=500, points=points)[0]


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_pdf_integrates_to_one(name):
    m = make_model(name)
    assert _line_integral(lambda t: model_pdf(m, t), name) == pytest.approx(1.0, abs=1e-6)
    assert np.all(model_pdf(m, np.linspace(-6, 6, 1001)) >= 0)


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_mass_outside_estimation_interval_is_small(name):
    # a component with a 3-sigma edge at +-3 still leaves ~3e-5 beyond +-4
    m = make_model(name)
    b = m.half_support
    assert 1.0 - (model_cdf(m, b) - model_cdf(m, -b)) < 1e-4


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_cdf_tails(name):
    m = make_model(name)
    assert model_cdf(m, -40.0) < 1e-12
    assert model_cdf(m, 40.0) > 1 - 1e-12


def test_bimodal_symmetry():
    assert model_cdf(make_model("separatedbimodal"), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_uniform_cdf():
    m = make_model("uniform")
    assert_allclose(model_cdf(m, [-2.0, -1.0, -0.5, 0.0, 1.0, 3.0]), [0.0, 0.0, 0.25, 0.5, 1.0, 1.0])


@pytest.mark.parametrize("name", MIXTURES)
def test_cdf_matches_pdf_quadrature(name):
    m = make_model(name)
    x = np.linspace(-4, 4, 40001)
    F = cumulative_trapezoid(model_pdf(m, x), x, initial=0.0) + model_cdf(m, -4.0)
    assert_allclose(F, model_cdf(m, x), atol=1e-6)


def test_unknown_model():
    with pytest.raises(ConfigurationError):
        make_model("claw")


def test_mixture_validation():
    with pytest.raises(ConfigurationError):
        MixtureModel(((0.5, 0.0, 1.0), (0.4, 1.0, 1.0)), "bad")
    with pytest.raises(ConfigurationError):
        MixtureModel(((1.0, 0.0, -1.0),), "bad")
    with pytest.raises(ConfigurationError):
        MixtureModel((), "bad", uniform=(1.0, 0.0))


def test_sampling_deterministic():
    m = make_model("kurtotic")
    a = sample_model(m, 500, replication_stream(3, 7))
    b = sample_model(m, 500, replication_stream(3, 7))
    c = sample_model(m, 500, replication_stream(3, 8))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_kurtotic_sample_mean():
    m = make_model("kurtotic")
    n = 100_000
    x = sample_model(m, n, np.random.default_rng(1))
    assert abs(x.mean() - m.mean()) < 3 * math.sqrt(m.variance() / n)


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_sample_ks(name):
    m = make_model(name)
    x = sample_model(m, 10_000, np.random.default_rng(5))
    assert kstest(x, lambda t: model_cdf(m, t)).statistic < 0.02


def test_bounded_sampling_redraws():
    m = make_model("kurtotic")
    x = sample_model(m, 20_000, np.random.default_rng(0), bound=1.0)
    assert np.all(np.abs(x) <= 1.0)


def test_sample_size_validation():
    with pytest.raises(ConfigurationError):
        sample_model(make_model("uniform"), 0, np.random.default_rng(0))
    with pytest.raises(ConfigurationError):
        sample_max_of_N(make_model("uniform"), NSpec("degenerate", 1), 0, np.random.default_rng(0))


def test_true_g_identity_weight():
    m = make_model("stronglyskewed")
    x = np.linspace(-4, 4, 101)
    assert np.array_equal(true_g(m, WeightSpec.degenerate(1), x), model_pdf(m, x))


@pytest.mark.parametrize("name", MODEL_NAMES)
@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_true_g_integrates_to_one(name, spec):
    m = make_model(name)
    assert _line_integral(lambda t: true_g(m, spec, t), name) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_geometric_small_eta_shifts_mass_right(name):
    m = make_model(name)
    mean_f = _line_integral(lambda t: t * model_pdf(m, t), name)
    mean_g = _line_integral(lambda t: t * true_g(m, WeightSpec.geometric(0.1), t), name)
    assert mean_g > mean_f


def test_count_sampler_laws():
    rng = np.random.default_rng(0)
    geo = sample_counts(NSpec("geometric", 0.3), 100_000, rng)
    assert geo.min() >= 1
    assert geo.mean() == pytest.approx(1 / 0.3, rel=0.02)
    poi = sample_counts(NSpec("poisson+1", 2.0), 100_000, rng)
    assert poi.min() >= 1
    assert poi.mean() == pytest.approx(3.0, rel=0.02)
    assert np.all(sample_counts(NSpec("degenerate", 4), 10, rng) == 4)


def test_nspec_conversion():
    assert NSpec.from_weight(WeightSpec.geometric(0.5)).weight() == WeightSpec.geometric(0.5)
    with pytest.raises(ConfigurationError):
        NSpec.from_weight(WeightSpec.order_statistic(3, 2))
    with pytest.raises(ConfigurationError):
        NSpec("binomial", 0.5)


def test_max_of_one_is_sample():
    m = make_model("separatedbimodal")
    y = sample_max_of_N(m, NSpec("degenerate", 1), 10_000, np.random.default_rng(1))
    assert kstest(y, lambda t: model_cdf(m, t)).statistic < 0.02


def test_max_of_two_follows_square():
    m = make_model("kurtotic")
    y = sample_max_of_N(m, NSpec("degenerate", 2), 10_000, np.random.default_rng(2))
    assert kstest(y, lambda t: model_cdf(m, t) ** 2).statistic < 0.02


def test_max_of_geometric_follows_pgf_composition():
    m = make_model("stronglyskewed")
    eta = 0.5
    y = sample_max_of_N(m, NSpec("geometric", eta), 10_000, np.random.default_rng(3))
    F = lambda t: model_cdf(m, t)
    assert kstest(y, lambda t: eta * F(t) / (1 - (1 - eta) * F(t))).statistic < 0.02
