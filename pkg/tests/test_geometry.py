import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from rssdetect.distributions import RngStream
from rssdetect.errors import DomainError, InvalidParams
from rssdetect.geometry import (PRESETS, SUBURBAN, URBAN, EnvironmentProfile,
                                default_truncation_radius, horizontal_distance_for_elevation,
                                link_geometry, los_probability, nearest_neighbor_pdf,
                                sample_nearest_distance, sample_ppp_disk)


def rayleigh_cdf(lam):
    return lambda r: 1 - np.exp(-lam * math.pi * np.asarray(r) ** 2)


class TestEnvironmentProfile:

    def test_presets(self):
        assert PRESETS["suburban"] is SUBURBAN and PRESETS["urban"] is URBAN
        assert SUBURBAN.b_i == 2.0
        npt.assert_allclose(10 * math.log10(URBAN.eta_nlos), 20.0)

    @pytest.mark.parametrize("change", [{"a": 0}, {"b": -1}, {"eta_los": 0.5},
                                        {"eta_nlos": 1.0}, {"gamma_i": 2.0},
                                        {"gamma_i": 5.0}, {"sigma_s": -0.1}])
    def test_validation(self, change):
        with pytest.raises(InvalidParams):
            SUBURBAN.with_(**change)

    @given(st.floats(0.5, 20), st.floats(0.05, 1), st.floats(0, 5), st.floats(6, 30),
           st.floats(2.13, 4.89), st.floats(0, 2))
    def test_dict_round_trip(self, a, b, los_db, nlos_db, gamma_i, sigma_s):
        env = EnvironmentProfile(a, b, 10 ** (los_db / 10), 10 ** (nlos_db / 10), gamma_i, sigma_s)
        back = EnvironmentProfile.from_dict(env.to_dict())
        npt.assert_allclose([back.eta_los, back.eta_nlos], [env.eta_los, env.eta_nlos], rtol=1e-12)
        assert (back.a, back.b, back.gamma_i, back.sigma_s) == (a, b, gamma_i, sigma_s)


class TestPointProcess:

    def test_mean_count(self):
        gen = RngStream(1).generator()
        counts = [len(sample_ppp_disk(1e-4, 1000.0, gen)) for _ in range(10_000)]
        npt.assert_allclose(np.mean(counts), 1e-4 * math.pi * 1e6, atol=0.5)
        npt.assert_allclose(np.var(counts), 1e-4 * math.pi * 1e6, rtol=0.05)

    def test_void_probability(self):
        gen = RngStream(2).generator()
        lam, r = 1e-4, 60.0
        empty = np.mean([np.all(sample_ppp_disk(lam, 200.0, gen).radii > r) for _ in range(20_000)])
        npt.assert_allclose(empty, math.exp(-lam * math.pi * r * r), atol=0.015)

    def test_nearest_point_law(self):
        gen = RngStream(3).generator()
        lam = 1e-4
        near = [sample_ppp_disk(lam, 500.0, gen).radii[0] for _ in range(3000)]
        assert stats.kstest(near, rayleigh_cdf(lam)).pvalue > 0.01

    def test_sorted_and_inside(self):
        f = sample_ppp_disk(1e-3, 300.0, RngStream(4))
        r = f.radii
        assert np.all(np.diff(r) >= 0) and np.all(r <= 300.0)
        assert not f.points.flags.writeable

    def test_uniform_angles(self):
        f = sample_ppp_disk(1e-3, 1000.0, RngStream(5))
        ang = np.mod(np.arctan2(f.points[:, 1], f.points[:, 0]), 2 * math.pi)
        assert stats.kstest(ang / (2 * math.pi), "uniform").pvalue > 0.01

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidParams):
            sample_ppp_disk(0.0, 10.0, 0)

    def test_truncation_radius(self):
        lam = 1e-5
        npt.assert_allclose(math.exp(-lam * math.pi * default_truncation_radius(lam) ** 2),
                            math.exp(-900))


class TestNearestNeighbour:

    def test_pdf_basics(self):
        assert nearest_neighbor_pdf(0.0, 1e-4) == 0.0
        total = integrate.quad(nearest_neighbor_pdf, 0, np.inf, args=(1e-4,), epsabs=1e-13)[0]
        npt.assert_allclose(total, 1.0, atol=1e-10)
        mean = integrate.quad(lambda r: r * nearest_neighbor_pdf(r, 1e-4), 0, np.inf, epsabs=1e-12)[0]
        npt.assert_allclose(mean, 50.0, atol=1e-6)
        with pytest.raises(DomainError):
            nearest_neighbor_pdf(-1.0, 1e-4)

    @pytest.mark.parametrize("lam,mean,tol", [(1e-4, 50.0, 0.1), (1e-6, 500.0, 1.0)])
    def test_sample_mean(self, lam, mean, tol):
        r = sample_nearest_distance(lam, RngStream(6), 1_000_000)
        npt.assert_allclose(r.mean(), mean, atol=tol)

    def test_sample_histogram(self):
        lam = 1e-4
        r = sample_nearest_distance(lam, RngStream(7), 1_000_000)
        edges = np.linspace(0, 200, 21)
        counts, _ = np.histogram(r, edges)
        dens = counts / (len(r) * np.diff(edges))
        cdf = rayleigh_cdf(lam)
        exact = (cdf(edges[1:]) - cdf(edges[:-1])) / np.diff(edges)
        assert np.max(np.abs(dens - exact)) / exact.max() < 0.01
        assert stats.kstest(r[:50_000], cdf).pvalue > 0.01


class TestLinkGeometry:

    def test_reference_points(self):
        d, th = link_geometry(923.0, 300.0)
        npt.assert_allclose(th, 18.0, atol=0.05)
        assert link_geometry(0.0, 300.0) == (300.0, 90.0)
        npt.assert_allclose(link_geometry(300.0, 300.0)[1], 45.0)
        npt.assert_allclose(link_geometry(400.0, 300.0)[0], 500.0)

    def test_vectorised(self):
        d, th = link_geometry(np.array([0.0, 300.0]), 300.0)
        npt.assert_allclose(th, [90.0, 45.0])

    def test_elevation_inverse(self):
        r0 = horizontal_distance_for_elevation(18.0, 300.0)
        npt.assert_allclose(link_geometry(r0, 300.0)[1], 18.0)


class TestLosProbability:

    def test_urban_reference(self):
        expected = 1 / (1 + 9.61 * math.exp(-0.16 * (18 - 9.61)))
        npt.assert_allclose(los_probability(923.0, 300.0, URBAN), 0.285, atol=0.01)
        npt.assert_allclose(los_probability(923.0, 300.0, URBAN), expected, atol=1e-3)

    def test_overhead(self):
        assert los_probability(0.0, 300.0, SUBURBAN) > 0.999

    @given(st.floats(1, 300), st.floats(50, 1000))
    def test_decreasing_in_distance(self, h, r0):
        for env in (SUBURBAN, URBAN):
            assert los_probability(r0 * 1.1, h, env) < los_probability(r0, h, env)
