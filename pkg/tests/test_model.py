import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluorospec.model import (DotParams, DriveParams, FilterSettings, correlation,
                              dot_params_from_d0, dot_params_from_rates, population_inversion)
from fluorospec.numerics import rk4_solve


class TestDotParams:
    @pytest.mark.parametrize("d0, gamma_p", [(-1.0, 0.0), (0.0, 2.0), (0.5, 6.0)])
    def test_from_d0(self, d0, gamma_p):
        p = dot_params_from_d0(1.0, d0)
        assert p.gamma_p == pytest.approx(gamma_p, rel=1e-15)
        assert p.gamma_big_d == pytest.approx(2.0 + gamma_p, rel=1e-15)
        assert p.d0 == d0

    def test_from_rates_round_trip(self):
        for gp in (0.0, 0.3, 2.0, 17.0):
            p = dot_params_from_rates(1.5, gp)
            tau_d, tau_p = 1 / 3.0, (1 / gp if gp else math.inf)
            expected = -1.0 if gp == 0 else (tau_d - tau_p) / (tau_d + tau_p)
            assert p.d0 == pytest.approx(expected, abs=1e-15)
            assert p.gamma_big_d == pytest.approx(3.0 + gp)
            back = dot_params_from_d0(1.5, p.d0)
            assert back.gamma_p == pytest.approx(gp, abs=1e-12)

    def test_separate_longitudinal_rate(self):
        p = dot_params_from_rates(1.0, 2.0, gamma_d=5.0)
        assert p.gamma_big_d == 7.0
        assert p.d0 == pytest.approx(-3 / 7)

    @pytest.mark.parametrize("d0", [1.0, 1.2, -1.01, math.nan])
    def test_bad_d0(self, d0):
        with pytest.raises(ValueError):
            dot_params_from_d0(1.0, d0)

    @pytest.mark.parametrize("gs", [0.0, -1.0, math.inf])
    def test_bad_gamma_s(self, gs):
        with pytest.raises(ValueError):
            dot_params_from_d0(gs, 0.0)
        with pytest.raises(ValueError):
            dot_params_from_rates(gs, 1.0)

    def test_negative_pump(self):
        with pytest.raises(ValueError):
            dot_params_from_rates(1.0, -0.1)

    def test_direct_construction_validates(self):
        with pytest.raises(ValueError):
            DotParams(1.0, 2.0, 1.5, 4.0)

    def test_immutable(self):
        p = dot_params_from_d0(1.0, 0.0)
        with pytest.raises(dataclasses.FrozenInstanceError):
            p.d0 = 0.5


class TestDriveAndFilter:
    def test_modulation_index(self):
        assert DriveParams(100.0, 10.0).m == 10.0
        assert DriveParams(-3.0, 2.0, 0.4).m == -1.5

    @pytest.mark.parametrize("w", [0.0, -1.0, math.nan])
    def test_bad_frequency(self, w):
        with pytest.raises(ValueError):
            DriveParams(1.0, w)

    def test_filter_width(self):
        assert FilterSettings(0.0).gamma_filter == 0.0
        with pytest.raises(ValueError):
            FilterSettings(-1.0)


class TestPopulationInversion:
    def test_fixed_point(self, dot):
        for t in (0.0, 0.3, 10.0):
            assert population_inversion(dot, dot.d0, t) == dot.d0

    def test_value(self, dot):
        assert population_inversion(dot, -1.0, 0.5) == pytest.approx(-math.exp(-2.0), rel=1e-15)

    def test_against_rk4(self, dot):
        # dD/dt = -Gamma_D (D - D0)
        got = rk4_solve(lambda t, y: -dot.gamma_big_d * (y - dot.d0), -1.0, 0.0, 0.5, 2000)
        assert got.real == pytest.approx(population_inversion(dot, -1.0, 0.5), rel=1e-12)

    def test_asymptote(self, dot):
        t = 8.0
        assert abs(population_inversion(dot, -1.0, t) - dot.d0) <= math.exp(-dot.gamma_big_d * t)

    def test_negative_time(self, dot):
        with pytest.raises(ValueError):
            population_inversion(dot, 0.0, -1.0)

    @given(st.floats(-1, 0.99), st.floats(-1, 1), st.floats(0, 5), st.floats(0, 5))
    @settings(max_examples=100, deadline=None)
    def test_monotone_and_bounded(self, d0, d_init, t1, t2):
        p = dot_params_from_d0(1.0, d0)
        a, b = sorted((t1, t2))
        da = population_inversion(p, d_init, a)
        db = population_inversion(p, d_init, b)
        assert -1.0 <= db <= 1.0
        assert abs(db - d0) <= abs(da - d0) + 1e-15


class TestCorrelation:
    def test_equal_time(self, dot):
        drive = DriveParams(10.0, 3.0, 0.7)
        for t in (0.0, 1.3, 50.0):
            assert correlation(dot, drive, t, 0.0) == complex(dot.population_weight)

    def test_unpumped(self, unpumped):
        assert correlation(unpumped, DriveParams(5.0, 1.0), 2.0, 1.0) == 0

    def test_against_rk4(self, dot):
        drive = DriveParams(1.0, 1.0, 0.0)

        def rhs(tau, y):
            return -(dot.gamma_s + 1j * drive.delta_as * math.cos(drive.omega_f * tau + drive.phi)) * y

        got = rk4_solve(rhs, dot.population_weight, 0.0, 1.0, 2000)
        assert abs(got - correlation(dot, drive, 0.0, 1.0)) < 1e-8

    def test_broadcasting(self, dot):
        drive = DriveParams(2.0, 1.0)
        out = correlation(dot, drive, np.array([[0.0], [1.0]]), np.linspace(0, 1, 5))
        assert out.shape == (2, 5)
        assert out[1, 2] == correlation(dot, drive, 1.0, 0.5)

    def test_negative_arguments(self, dot):
        with pytest.raises(ValueError):
            correlation(dot, DriveParams(1.0, 1.0), -0.1, 0.0)
        with pytest.raises(ValueError):
            correlation(dot, DriveParams(1.0, 1.0), 0.0, -0.1)

    @given(st.floats(0, 100), st.floats(0, 20), st.floats(-50, 50), st.floats(0.05, 20),
           st.floats(-7, 7), st.floats(-1, 0.99))
    @settings(max_examples=200, deadline=None)
    def test_modulus(self, t, tau, delta, w, phi, d0):
        p = dot_params_from_d0(1.0, d0)
        c = correlation(p, DriveParams(delta, w, phi), t, tau)
        expected = p.population_weight * math.exp(-tau)
        assert abs(abs(c) - expected) <= 1e-14 * expected

    @given(st.floats(0, 30), st.floats(0, 5), st.floats(0.1, 10), st.floats(-3, 3))
    @settings(max_examples=100, deadline=None)
    def test_periodic_in_t(self, t, tau, w, phi):
        p = dot_params_from_d0(1.0, 0.0)
        drive = DriveParams(7.0, w, phi)
        a = correlation(p, drive, t, tau)
        b = correlation(p, drive, t + 2 * math.pi / w, tau)
        # tolerance scales with the phase argument m * w * t carried in floating point
        assert abs(a - b) <= 1e-12 * max(1.0, abs(drive.m) * w * (t + 7))

    @given(st.floats(0, 20), st.floats(0, 5), st.floats(0.1, 10), st.floats(0, 6))
    @settings(max_examples=100, deadline=None)
    def test_phase_shift(self, t, tau, w, phi):
        p = dot_params_from_d0(1.0, 0.0)
        a = correlation(p, DriveParams(7.0, w, phi), t, tau)
        b = correlation(p, DriveParams(7.0, w, 0.0), t + phi / w, tau)
        assert abs(a - b) <= 1e-12 * max(1.0, 7.0 / w * (w * t + phi + 1))
