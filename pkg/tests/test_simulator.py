import math
import warnings

import numpy as np
import numpy.testing as npt
import pytest
from scipy import stats

from rssdetect.channel import amplitude_constant, build_interference_model
from rssdetect.detector import DetectorPoint, pfa, roc_curve, solve_threshold
from rssdetect.distributions import RngStream
from rssdetect.errors import GridMismatch, InvalidParams
from rssdetect.geometry import SUBURBAN, URBAN, link_geometry
from rssdetect.simulator import (IQSample, TrialConfig, empirical_roc, ks_pvalue,
                                 realization_variance, sample_realization,
                                 simulate_drone_signal, simulate_given_realization,
                                 simulate_interference, simulate_noise, simulate_rss,
                                 truncation_report, validation_report)


@pytest.fixture(scope="module")
def paired():
    from rssdetect.channel import NetworkConfig
    cfg = NetworkConfig()
    trial = TrialConfig(n_trials=100_000, seed=11)
    return cfg, trial, simulate_rss(cfg, SUBURBAN, trial)


def test_iq_sample():
    s = IQSample.from_complex(np.array([3 + 4j, 1j]))
    npt.assert_array_equal(s.rss, [25.0, 1.0])
    assert len(s) == 2
    npt.assert_array_equal(s.as_complex(), [3 + 4j, 1j])


class TestTrialConfig:

    @pytest.mark.parametrize("change", [{"n_trials": 0}, {"n_multipath": 0}, {"hypothesis": "h2"},
                                        {"los_state": "maybe"}, {"r0": -1.0}])
    def test_validation(self, change):
        with pytest.raises(InvalidParams):
            TrialConfig(**change)

    def test_default_radius(self):
        npt.assert_allclose(TrialConfig().radius(1e-5), 30 / math.sqrt(math.pi * 1e-5))
        assert TrialConfig(r_max=10.0).radius(1e-5) == 10.0


class TestInterference:

    def test_empty_field(self, net):
        y = simulate_interference(net.with_(lam=0.0), SUBURBAN, TrialConfig(n_trials=100))
        assert np.all(y.re == 0) and np.all(y.im == 0)

    def test_circular_symmetry(self, net):
        # b_I = 2 components are Cauchy, so the mean does not exist; use median and sign balance
        y = simulate_interference(net, SUBURBAN, TrialConfig(n_trials=50_000, seed=1))
        gamma_y = build_interference_model(net, SUBURBAN).stable_y.gamma
        for comp in (y.re, y.im):
            assert abs(np.median(comp)) < 0.03 * gamma_y
            npt.assert_allclose(np.mean(comp > 0), 0.5, atol=4 / math.sqrt(len(comp)))
        z = y.as_complex()
        npt.assert_allclose(np.mean(z**2 / np.abs(z) ** 2).real, 0.0, atol=0.02)

    def test_cauchy_law(self, net):
        y = simulate_interference(net, SUBURBAN, TrialConfig(n_trials=20_000, seed=2))
        gamma_y = build_interference_model(net, SUBURBAN).stable_y.gamma
        assert stats.kstest(y.re, stats.cauchy(scale=gamma_y).cdf).pvalue > 0.01

    def test_stable_law_other_exponent(self, net):
        env = SUBURBAN.with_(gamma_i=3.5)
        y = simulate_interference(net, env, TrialConfig(n_trials=20_000, seed=3))
        sy = build_interference_model(net, env).stable_y
        x = np.random.default_rng(4)
        ref = stats.levy_stable(sy.alpha, 0.0, scale=sy.scale)
        ref.dist.parameterization = "S1"
        assert stats.ks_2samp(y.re, ref.rvs(20_000, random_state=x)).pvalue > 0.01

    def test_reproducible_and_block_stable(self, net):
        # full blocks of 2048 trials do not depend on the total trial count
        a = simulate_interference(net, SUBURBAN, TrialConfig(n_trials=4096, seed=5))
        b = simulate_interference(net, SUBURBAN, TrialConfig(n_trials=5000, seed=5))
        npt.assert_array_equal(a.re, b.re[:4096])
        npt.assert_array_equal(a.re, simulate_interference(net, SUBURBAN, TrialConfig(n_trials=4096, seed=5)).re)
        c = simulate_interference(net, SUBURBAN, TrialConfig(n_trials=4096, seed=6))
        assert not np.allclose(a.re, c.re)


def test_noise_variance(net):
    n = simulate_noise(net, TrialConfig(n_trials=200_000, seed=7))
    npt.assert_allclose([np.var(n.re), np.var(n.im)], net.n0 / 2, rtol=0.01)


class TestDroneSignal:

    def _rx(self, net, r0):
        d, _ = link_geometry(r0, net.h)
        return amplitude_constant(net.f_c) ** 2 * net.rho**2 * net.p_d / d**2

    def test_nlos_variance(self, net):
        z = simulate_drone_signal(net, URBAN, 923.0, TrialConfig(n_trials=1_000_000, los_state="nlos"))
        target = self._rx(net, 923.0) / (2 * URBAN.eta_nlos)
        npt.assert_allclose([np.var(z.re), np.var(z.im)], target, rtol=0.01)

    def test_los_power_and_law(self, net):
        z = simulate_drone_signal(net, URBAN, 923.0, TrialConfig(n_trials=200_000, los_state="los", seed=8))
        rx = self._rx(net, 923.0)
        s2 = rx / (2 * URBAN.eta_nlos)
        npt.assert_allclose(np.mean(z.rss), rx / URBAN.eta_los + 2 * s2, rtol=0.01)
        # |Z|^2 / s2 is noncentral chi-squared with 2 dof and noncentrality mean^2 / s2
        assert ks_pvalue(z.rss[:20_000] / s2, stats.ncx2(2, rx / URBAN.eta_los / s2).cdf) > 0.01

    def test_los_fraction(self, net):
        from rssdetect.geometry import los_probability
        z = simulate_drone_signal(net, URBAN, 923.0, TrialConfig(n_trials=200_000, seed=9))
        rx = self._rx(net, 923.0)
        p_l = los_probability(923.0, net.h, URBAN)
        npt.assert_allclose(np.mean(z.rss), p_l * rx / URBAN.eta_los + rx / URBAN.eta_nlos, rtol=0.02)

    def test_finite_multipath_close_to_limit(self, net):
        a = simulate_drone_signal(net, SUBURBAN, 923.0, TrialConfig(n_trials=20_000, n_multipath=64, seed=1))
        b = simulate_drone_signal(net, SUBURBAN, 923.0, TrialConfig(n_trials=20_000, seed=2))
        assert stats.ks_2samp(a.rss, b.rss).pvalue > 0.01


class TestEmpiricalRoc:

    def test_null_ccdf_matches_pfa(self, paired):
        cfg, trial, (null, _) = paired
        m = build_interference_model(cfg, SUBURBAN)
        for alpha in (0.01, 0.05, 0.1, 0.3, 0.6):
            g = solve_threshold(alpha, m, cfg.n0)
            npt.assert_allclose(np.mean(null > g), pfa(g, m, cfg.n0), atol=0.005)

    def test_limits(self, paired):
        cfg, trial, rss = paired
        pts = empirical_roc(cfg, SUBURBAN, trial, [0.0, 1e-30, 1e-16, 1e-12, 1.0], rss=rss)
        assert (pts[0].p_fa, pts[0].p_d) == (1.0, 1.0)
        assert (pts[-1].p_fa, pts[-1].p_d) == (0.0, 0.0)
        assert all(p.p_d >= p.p_fa for p in pts)

    def test_matches_analytic(self, paired):
        cfg, trial, rss = paired
        m = build_interference_model(cfg, SUBURBAN)
        ana = roc_curve("single", cfg, SUBURBAN, m, np.logspace(-3, -0.3, 10), r0=trial.r0)
        emp = empirical_roc(cfg, SUBURBAN, trial, [p.gamma_thr for p in ana], rss=rss)
        rep = validation_report(ana, emp, 0.02, trial.n_trials)
        assert rep.passed, rep.summary()

    def test_small_run_warns(self, net):
        with pytest.warns(UserWarning):
            empirical_roc(net, SUBURBAN, TrialConfig(n_trials=1000), [1e-16])


class TestValidationReport:

    def _pts(self, shift=0.0):
        return [DetectorPoint(g, 0.1 * g + shift, 0.5 + shift) for g in (1.0, 2.0, 3.0)]

    def test_identical(self):
        rep = validation_report(self._pts(), self._pts())
        assert rep.passed and rep.max_deviation == 0.0
        assert rep.summary().startswith("PASS")

    def test_shifted(self):
        rep = validation_report(self._pts(), self._pts(0.05), tolerance=0.02, n_trials=1000)
        assert not rep.passed and not any(r["ok"] for r in rep.rows)
        npt.assert_allclose(rep.max_deviation, 0.05)
        lo, hi = rep.rows[0]["ci_d"]
        assert lo < 0.55 < hi

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            validation_report(self._pts(), self._pts()[:2])
        other = [DetectorPoint(g + 1, 0.0, 0.0) for g in (1.0, 2.0, 3.0)]
        with pytest.raises(GridMismatch):
            validation_report(self._pts(), other)


class TestFixedRealization:

    def test_null_is_exponential(self, net):
        gen = RngStream(21).generator()
        real = sample_realization(net, SUBURBAN, gen)
        s0 = realization_variance(real, net, SUBURBAN) + net.n0 / 2
        rss = simulate_given_realization(real, net, SUBURBAN, 5000, gen)
        assert ks_pvalue(rss, stats.expon(scale=2 * s0).cdf) > 0.01

    def test_los_alternative_is_noncentral(self, net):
        gen = RngStream(22).generator()
        real = sample_realization(net, URBAN, gen)
        d, _ = link_geometry(923.0, net.h)
        rx = amplitude_constant(net.f_c) ** 2 * net.p_d / d**2
        s1 = rx / (2 * URBAN.eta_nlos) + realization_variance(real, net, URBAN) + net.n0 / 2
        rss = simulate_given_realization(real, net, URBAN, 5000, gen, r0=923.0)
        assert ks_pvalue(rss / s1, stats.ncx2(2, rx / URBAN.eta_los / s1).cdf) > 0.01


def test_truncation_is_negligible(net):
    # remainder variance beyond R_max against the typical per-component interference scale
    m = build_interference_model(net, SUBURBAN)
    assert truncation_report(net, SUBURBAN, TrialConfig()) < 1e-3 * m.gamma_g
    assert truncation_report(net.with_(lam=0.0), SUBURBAN, TrialConfig()) == 0.0
