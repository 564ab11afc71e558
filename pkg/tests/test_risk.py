import numpy as np
import pytest
from numpy.testing import assert_allclose

from wden import (
    ConfigurationError,
    ExperimentConfig,
    ShapeError,
    WeightSpec,
    h_mise_scan,
    kappa_sweep,
    lp_risk,
    make_model,
    mise_study,
    mise_table,
    p_sweep,
    true_g,
)
from wden.estimator import decompose_sample, reconstruct
from wden.weights import EmpiricalCdf, weight_eval


def test_lp_risk_examples():
    assert lp_risk([1, 2, 3], [1, 2, 3], 2) == 0.0
    assert lp_risk(np.zeros(8), np.full(8, 0.3), 3) == pytest.approx(0.3**3)
    assert lp_risk([1, 2, 3, 4], [1, 2, 3, 6], 2) == 1.0
    with pytest.raises(ShapeError):
        lp_risk([1, 2], [1, 2, 3])
    with pytest.raises(ConfigurationError):
        lp_risk([1], [1], 0.5)


def _small(**kw):
    base = dict(model="kurtotic", weight=WeightSpec.geometric(0.5), n=400, reps=4, seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_defaults():
    cfg = ExperimentConfig()
    assert cfg.coarse_level == 3 and cfg.grid_levels == 9 and cfg.wavelet == "sym6"
    assert cfg.half_support == make_model("uniform").half_support
    assert ExperimentConfig(model="kurtotic").half_support == 4.0
    est = cfg.estimator()
    assert not est.clip_nonnegative and not est.renormalize


def test_report_consistency():
    reports = mise_study(_small())
    assert set(reports) == {"block", "termwise", "kernel"}
    for method, rep in reports.items():
        assert rep.method == method
        assert rep.mean_risk == pytest.approx(np.mean(rep.per_replication), rel=1e-15)
        assert all(r >= 0 for r in rep.per_replication)
        assert rep.mise_x1000 == 1000 * rep.mean_risk
        assert (rep.n, rep.seed, rep.model, rep.weight) == (400, 11, "Kurtotic", "geometric:0.5")


def test_deterministic():
    assert mise_study(_small()) == mise_study(_small())


def test_parallel_equals_serial():
    assert mise_study(_small(workers=2)) == mise_study(_small(workers=1))


def test_env_thread_cap(monkeypatch):
    monkeypatch.setenv("WDEN_THREADS", "2")
    assert mise_study(_small()) == mise_study(_small(workers=1))
    monkeypatch.setenv("WDEN_THREADS", "many")
    with pytest.raises(ConfigurationError):
        mise_study(_small())


def test_table_matches_single_weight_study():
    w = [WeightSpec.geometric(0.5), WeightSpec.geometric(0.9)]
    table = mise_table(_small(), w)
    single = mise_study(_small(weight=w[1]))
    for method in ("block", "termwise", "kernel"):
        assert table["geometric:0.9", method] == single[method]


def test_needs_two_replications():
    with pytest.raises(ConfigurationError):
        mise_study(_small(reps=1))


def test_block_risk_recomputed_by_hand():
    cfg = _small(reps=2, methods=("block",))
    rep = mise_study(cfg)["block"]
    model = make_model(cfg.model)
    g = true_g(model, cfg.weight, cfg.grid)
    for r in range(2):
        x = cfg.sample(r)
        f = reconstruct(decompose_sample(x, cfg.estimator())).values
        g_hat = weight_eval(cfg.weight, EmpiricalCdf(x)(cfg.grid)) * f
        assert rep.per_replication[r] == pytest.approx(np.mean((g_hat - g) ** 2), rel=1e-12)


def test_kappa_sweep_structure():
    cfg = _small(model="stronglyskewed", n=1000, reps=3, weight=WeightSpec.degenerate(2))
    sw = kappa_sweep(cfg, points=21)
    assert sw.kappas[0] == 0.0
    assert np.all(np.diff(sw.kappas) >= 0)
    assert sw.kappas[sw.universal_index] == sw.universal
    assert sw.universal_risk == sw.risks[sw.universal_index]
    # no thresholding: every coefficient up to j2 is kept
    model = make_model(cfg.model)
    g = true_g(model, cfg.weight, cfg.grid)
    risks = []
    for r in range(cfg.reps):
        x = cfg.sample(r)
        f = reconstruct(decompose_sample(x, cfg.estimator()), kappa=0.0).values
        risks.append(np.mean((weight_eval(cfg.weight, EmpiricalCdf(x)(cfg.grid)) * f - g) ** 2))
    assert sw.risks[0] == pytest.approx(np.mean(risks), rel=1e-12)


@pytest.mark.parametrize("model", ["uniform", "kurtotic"])
def test_kappa_curve_not_monotone(model):
    cfg = _small(model=model, n=1000, reps=5, weight=WeightSpec.degenerate(2))
    sw = kappa_sweep(cfg)
    assert sw.risks[0] > sw.risks.min()


def test_p_sweep():
    cfg = _small(model="uniform", n=1000, reps=10, weight=WeightSpec.degenerate(2))
    rows = p_sweep(cfg)
    assert [r[0] for r in rows] == [1.0, 1.5, 2.0, 2.5, 3.0]
    p1 = rows[0]
    assert np.isfinite(p1[1]) and p1[1] > 0 and np.isfinite(p1[2]) and p1[2] > 0
    block_p2, term_p2 = rows[2][1], rows[2][2]
    assert block_p2 <= term_p2
    with pytest.raises(ConfigurationError):
        p_sweep(cfg, [0.5])


@pytest.mark.parametrize("model,lo,hi", [("uniform", 0.0255, 0.0765), ("stronglyskewed", 0.0195, 0.0585)])
def test_h_mise(model, lo, hi):
    cfg = _small(model=model, n=1000, reps=20, weight=WeightSpec.degenerate(1))
    h_mise, hs, mise = h_mise_scan(cfg)
    assert len(hs) >= 20
    assert lo <= h_mise <= hi
    assert mise[0] > mise.min() and mise[-1] > mise.min()


def test_h_mise_scan_needs_points():
    with pytest.raises(ConfigurationError):
        h_mise_scan(_small(), points=10)


@pytest.mark.slow
def test_kernel_magnitude_kurtotic():
    # reference 1000 x MISE of the kernel plug-in: 13.03, tolerance 40%
    cfg = ExperimentConfig(model="kurtotic", weight=WeightSpec.geometric(0.5), n=1000, reps=50,
                           seed=2024, methods=("kernel",))
    value = mise_study(cfg)["kernel"].mise_x1000
    assert 13.03 * 0.6 <= value <= 13.03 * 1.4, value
