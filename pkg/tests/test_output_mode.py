"""Adiabatic output-mode pipeline vs the analytic double-integral route."""

import warnings

import numpy as np
import pytest

import cvoptomech as cv
from cvoptomech.dynamics import _integrate_raw
from cvoptomech.output_mode import (
    _integration_config,
    build_extended_system,
    initial_extended_state,
)

PERIOD = 2 * np.pi / 1000.0


def quiet_build(p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cv.BadCavityValidityWarning)
        return build_extended_system(p)


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cv.BadCavityValidityWarning)
        return fn(*args, **kwargs)


class TestBadCavityParams:
    def test_derived_rates(self, fig4a_params):
        p = fig4a_params(10.0)
        assert p.big_gamma == pytest.approx(0.5, abs=1e-12)
        assert p.z == pytest.approx(complex(0.5, 1000.0))
        assert p.g1 == pytest.approx(np.sqrt(667.0 * 6000.0), rel=1e-12)
        assert p.max_rate == 1000.0

    def test_validity_flags_at_figure_parameters(self, fig4a_params):
        # g/kappa = 1/3: inside the operating policy, but not kappa >= 10 g.
        p = fig4a_params()
        assert p.bad_cavity_valid
        assert not p.strongly_adiabatic

    def test_strongly_adiabatic_flag(self):
        p = cv.BadCavityParams(G1=1.0, G2=0.5, kappa1=10000.0, kappa2=10000.0, delta=10.0)
        assert p.strongly_adiabatic
        assert p.bad_cavity_valid

    @pytest.mark.parametrize("kwargs,match", [
        (dict(G1=-1.0, G2=1.0, kappa1=10.0, kappa2=10.0, delta=1.0), "G1"),
        (dict(G1=1.0, G2=1.0, kappa1=0.0, kappa2=10.0, delta=1.0), "kappa1"),
        (dict(G1=1.0, G2=1.0, kappa1=10.0, kappa2=10.0, delta=1.0, gamma=0.0), "gamma"),
        (dict(G1=1.0, G2=1.0, kappa1=10.0, kappa2=10.0, delta=float("nan")), "delta"),
    ])
    def test_rejects_bad_parameters(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            cv.BadCavityParams(**kwargs)


class TestValidityWarnings:
    def test_moderately_adiabatic_warns(self, fig4a_params):
        with pytest.warns(cv.BadCavityValidityWarning, match="approximate"):
            build_extended_system(fig4a_params())

    def test_overdriven_warns_unreliable(self):
        p = cv.BadCavityParams(G1=667.0, G2=667.0, kappa1=1000.0, kappa2=1000.0,
                               delta=1000.0)
        with pytest.warns(cv.BadCavityValidityWarning, match="unreliable"):
            build_extended_system(p)

    def test_strongly_adiabatic_is_silent(self):
        p = cv.BadCavityParams(G1=1.0, G2=0.5, kappa1=10000.0, kappa2=10000.0, delta=10.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_extended_system(p)


class TestExtendedSystem:
    def test_mechanical_block_and_accumulator_rows(self, fig4a_params):
        p = fig4a_params()
        dd = quiet_build(p)
        s = 2.0 * np.sqrt(667.0)
        assert dd.drift[0, 0] == pytest.approx(-0.5)
        assert dd.drift[0, 1] == pytest.approx(1000.0)
        assert dd.drift[1, 0] == pytest.approx(-1000.0)
        assert dd.drift[2, 1] == pytest.approx(s)
        assert dd.drift[3, 0] == pytest.approx(-s)
        assert dd.drift[4, 1] == pytest.approx(-s)
        assert dd.drift[5, 0] == pytest.approx(-s)
        # Accumulators feed back on nothing.
        assert np.all(dd.drift[:, 2:] == 0.0)

    def test_diffusion_is_psd(self, fig4a_params):
        dd = quiet_build(fig4a_params(1000.0))
        assert np.linalg.eigvalsh(dd.diffusion).min() >= -1e-12

    def test_initial_state(self, fig4a_params):
        v0 = initial_extended_state(fig4a_params(7.0))
        np.testing.assert_array_equal(v0, np.diag([7.5, 7.5, 0, 0, 0, 0]))

    def test_mechanical_steady_state_variance(self):
        # At G1 = G2 the drift leaves Gamma = gamma/2 and the mechanical
        # variance relaxes to (2 G1 + 2 G2 + gamma (n_th + 1/2)) / (2 Gamma).
        p = cv.BadCavityParams(G1=2.0, G2=2.0, kappa1=4000.0, kappa2=4000.0,
                               delta=5.0, n_th=3.0)
        dd = quiet_build(p)
        cfg = _integration_config(p, 30.0, None)
        _, records = _integrate_raw(dd, initial_extended_state(p), cfg)
        expected = (2 * 2.0 + 2 * 2.0 + 1.0 * 3.5) / (2 * 0.5)
        assert records[-1][0, 0] == pytest.approx(expected, rel=1e-9)
        assert records[-1][1, 1] == pytest.approx(expected, rel=1e-9)


class TestOutputModeCovariance:
    def test_zero_coupling_reflects_vacuum(self):
        p = cv.BadCavityParams(G1=0.0, G2=0.0, kappa1=0.0, kappa2=0.0, delta=3.0, n_th=9.0)
        res = quiet(cv.output_mode_covariance, p, 1.7)
        np.testing.assert_allclose(res.covariance.matrix, 0.5 * np.eye(4), atol=1e-12)
        assert res.e_n == 0.0

    def test_entanglement_at_first_pulse_duration(self, fig4a_params):
        res = quiet(cv.output_mode_covariance, fig4a_params(10.0), PERIOD)
        assert res.e_n == pytest.approx(0.9843, abs=2e-3)
        assert res.tau == PERIOD

    def test_short_duration_is_nearly_separable(self, fig4a_params):
        p = fig4a_params(10.0)
        short = quiet(cv.output_mode_covariance, p, PERIOD / 200)
        long = quiet(cv.output_mode_covariance, p, PERIOD)
        assert short.e_n < 0.05
        assert short.e_n < long.e_n

    def test_explicit_dt_must_divide_duration(self, fig4a_params):
        with pytest.raises(ValueError, match="divide"):
            quiet(cv.output_mode_covariance, fig4a_params(), 1.0, dt=0.3)

    def test_nonpositive_duration_rejected(self, fig4a_params):
        with pytest.raises(ValueError, match="tau"):
            quiet(cv.output_mode_covariance, fig4a_params(), 0.0)

    def test_heating_dominated_long_pulse_rejected(self):
        p = cv.BadCavityParams(G1=1.0, G2=30.0, kappa1=4000.0, kappa2=4000.0, delta=50.0)
        assert p.big_gamma < 0
        with pytest.raises(cv.StabilityError, match="Gamma"):
            quiet(cv.output_mode_covariance, p, 1.0)

    def test_heating_dominated_short_pulse_allowed(self):
        p = cv.BadCavityParams(G1=1.0, G2=30.0, kappa1=4000.0, kappa2=4000.0, delta=50.0)
        res = quiet(cv.output_mode_covariance, p, 0.005)
        assert res.e_n >= 0.0


class TestEntanglementVsDuration:
    def test_grid_scan_returns_series_with_peaks(self, fig4a_params):
        taus = (np.arange(1, 33) / 16.0) * PERIOD
        series = quiet(cv.entanglement_vs_duration, fig4a_params(10.0), taus)
        assert series.times.shape == (32,)
        assert len(series.peaks) >= 2
        t1 = series.peaks[0][0]
        assert abs(t1 - PERIOD) <= PERIOD / 16 + 1e-12

    @pytest.mark.parametrize("bad_grid", [
        np.array([]), np.array([0.0, 0.1]), np.array([0.2, 0.1]),
    ])
    def test_rejects_bad_grids(self, bad_grid, fig4a_params):
        with pytest.raises(ValueError):
            quiet(cv.entanglement_vs_duration, fig4a_params(), bad_grid)


class TestDoubleIntegralOracle:
    def test_matches_extended_system_at_figure_parameters(self, fig4a_params):
        p = fig4a_params(10.0)
        direct = quiet(cv.double_integral_oracle, p, PERIOD, 2000)
        extended = quiet(cv.output_mode_covariance, p, PERIOD)
        assert np.abs(direct.matrix - extended.covariance.matrix).max() < 2e-4

    def test_matches_extended_system_on_random_stable_tuples(self):
        rng = np.random.default_rng(20260815)
        for _ in range(5):
            g1 = float(rng.uniform(50.0, 800.0))
            g2 = float(rng.uniform(0.3 * g1, 0.95 * g1))  # Gamma > 0
            delta = float(rng.uniform(100.0, 1500.0))
            n_th = float(rng.uniform(0.0, 50.0))
            p = cv.BadCavityParams(G1=g1, G2=g2, kappa1=6000.0, kappa2=6000.0,
                                   delta=delta, n_th=n_th)
            tau = float(rng.uniform(0.5, 2.0)) * 2 * np.pi / delta
            direct = quiet(cv.double_integral_oracle, p, tau, 2000)
            extended = quiet(cv.output_mode_covariance, p, tau)
            scale = max(1.0, np.abs(extended.covariance.matrix).max())
            assert np.abs(direct.matrix - extended.covariance.matrix).max() < 1e-3 * scale

    def test_rejects_coarse_grids(self, fig4a_params):
        with pytest.raises(ValueError, match="grid_points"):
            quiet(cv.double_integral_oracle, fig4a_params(), PERIOD, 499)

    def test_rejects_noninteger_grid(self, fig4a_params):
        with pytest.raises(ValueError, match="grid_points"):
            quiet(cv.double_integral_oracle, fig4a_params(), PERIOD, 1000.5)

    def test_grid_refinement_converges(self, fig4a_params):
        p = fig4a_params(10.0)
        coarse = quiet(cv.double_integral_oracle, p, PERIOD, 1000)
        fine = quiet(cv.double_integral_oracle, p, PERIOD, 2000)
        finest = quiet(cv.double_integral_oracle, p, PERIOD, 4000)
        d1 = np.abs(coarse.matrix - fine.matrix).max()
        d2 = np.abs(fine.matrix - finest.matrix).max()
        assert d2 < d1  # second-order quadrature: error shrinks with the grid
