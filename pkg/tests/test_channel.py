import warnings

import numpy as np
import pytest

from satrelay.channel import (
    ChannelParams,
    GridInverseCdf,
    InverseCdfFitError,
    SeriesTruncationWarning,
    SrParams,
    fading_threshold_coefficient,
    fit_inverse_cdf,
    link_snr,
    path_loss_db,
    sample_sr,
    sr_cdf,
    sr_mean,
    to_db,
    to_linear,
)
from satrelay.point_process import RngStream

TABLE_SR = SrParams(1.29, 0.158, 19.4)


class TestSrCdf:
    def test_zero(self):
        assert sr_cdf(0.0, TABLE_SR) == 0.0

    def test_normalizes_to_one(self):
        assert sr_cdf(200.0, TABLE_SR, z_max=50) == pytest.approx(1.0, abs=1e-6)

    def test_mean_against_integration_oracle(self):
        # E[X] = integral of (1 - CDF) over [0, inf), trapezoid oracle
        xs = np.linspace(0.0, 60.0, 200_001)
        mean = np.trapezoid(1.0 - sr_cdf(xs, TABLE_SR), xs)
        assert mean == pytest.approx(2 * TABLE_SR.b0 + TABLE_SR.omega, rel=1e-6)
        assert mean == pytest.approx(1.606, rel=1e-6)

    def test_nondecreasing_and_bounded(self):
        gen = np.random.default_rng(1)
        for _ in range(5):
            p = SrParams(gen.uniform(0.2, 3), gen.uniform(0.05, 0.5), gen.uniform(1, 30))
            xs = np.linspace(0.0, 30.0, 10_000)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SeriesTruncationWarning)
                F = sr_cdf(xs, p)
            assert (np.diff(F) >= -1e-12).all()
            assert F.min() >= 0.0 and F.max() <= 1.0

    def test_zmax_monotone(self):
        x = 2.5
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SeriesTruncationWarning)
            vals = [sr_cdf(x, TABLE_SR, z_max=z) for z in (2, 5, 10, 25, 50)]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_truncation_warning(self):
        with pytest.warns(SeriesTruncationWarning):
            sr_cdf(10.0, TABLE_SR, z_max=3)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            sr_cdf(-0.1, TABLE_SR)


class TestInverseCdfFit:
    def test_round_trip_central_mass(self):
        fit = fit_inverse_cdf(TABLE_SR, degree=10)
        grid = GridInverseCdf.build(TABLE_SR)
        xs = np.linspace(grid(0.05), grid(0.95), 400)
        back = fit(sr_cdf(xs, TABLE_SR))
        assert np.abs(back / xs - 1.0).max() < 0.02

    def test_monotone_on_domain(self):
        fit = fit_inverse_cdf(TABLE_SR)
        u = np.linspace(fit.u_lo, fit.u_hi, 10_000)
        assert (np.diff(fit(u)) > 0).all()

    def test_degree_one_on_near_linear_segment(self):
        # central CDF segment is nearly linear; a line fits within its
        # curvature bound
        fit = fit_inverse_cdf(TABLE_SR, degree=1, domain=(0.45, 0.55))
        grid = GridInverseCdf.build(TABLE_SR)
        u = np.linspace(0.45, 0.55, 200)
        assert np.abs(fit(u) - grid(u)).max() < 0.01

    def test_residual_gate(self):
        with pytest.raises(InverseCdfFitError):
            fit_inverse_cdf(TABLE_SR, degree=10, rel_tol=1e-6)

    def test_grid_size_validation(self):
        with pytest.raises(ValueError):
            fit_inverse_cdf(TABLE_SR, degree=10, grid_size=5)


class TestSampleSr:
    def test_nonnegative_and_scalar(self):
        fit = fit_inverse_cdf(TABLE_SR)
        draws = [sample_sr(RngStream(3, i), fit) for i in range(200)]
        assert all(d >= 0.0 for d in draws)

    def test_mean_and_ks_polynomial(self):
        fit = fit_inverse_cdf(TABLE_SR)
        gen = RngStream(4).generator()
        s = fit.sample(gen, 300_000)
        assert s.mean() == pytest.approx(1.606, rel=0.02)
        xs = np.sort(s)
        ks = np.abs(sr_cdf(xs, TABLE_SR) - np.arange(1, len(xs) + 1) / len(xs)).max()
        assert ks < 0.01

    def test_grid_sampler_is_sharper(self):
        grid = GridInverseCdf.build(TABLE_SR)
        gen = RngStream(5).generator()
        s = grid.sample(gen, 300_000)
        xs = np.sort(s)
        ks = np.abs(sr_cdf(xs, TABLE_SR) - np.arange(1, len(xs) + 1) / len(xs)).max()
        assert ks < 0.004
        assert s.mean() == pytest.approx(1.606, rel=0.005)


class TestPathLoss:
    def test_free_space_one_meter(self):
        # standard FSPL closed form at 1 m, 300 MHz evaluates to 22.0 dB
        assert path_loss_db(0.001, 300e6, 2.0) == pytest.approx(22.0, abs=0.1)

    def test_doubling_distance_alpha2(self):
        delta = path_loss_db(2.0, 300e6) - path_loss_db(1.0, 300e6)
        assert delta == pytest.approx(20.0 * np.log10(2.0), abs=1e-9)

    def test_doubling_distance_alpha4(self):
        delta = path_loss_db(2.0, 300e6, 4.0) - path_loss_db(1.0, 300e6, 4.0)
        assert delta == pytest.approx(40.0 * np.log10(2.0), abs=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            path_loss_db(0.0, 300e6)
        with pytest.raises(ValueError):
            path_loss_db(1.0, 0.0)


class TestLinkSnr:
    def test_budget_additivity(self):
        cfg = ChannelParams(
            gw_antenna_gain_db=0.0, sat_antenna_gain_db=0.0, tx_power_db=10.0
        )
        budget = link_snr(cfg, 100.0, 1.0, rain_active=False, noise_db=-80.0)
        expected = 10.0 - path_loss_db(100.0, cfg.carrier_freq_hz) + 80.0
        assert budget.snr_db == pytest.approx(expected, abs=1e-12)

    def test_rain_toggle_is_minus_two_db(self):
        cfg = ChannelParams()
        on = link_snr(cfg, 800.0, 1.0, True, cfg.surface_noise_db)
        off = link_snr(cfg, 800.0, 1.0, False, cfg.surface_noise_db)
        assert on.snr_db - off.snr_db == pytest.approx(-2.0, abs=1e-12)

    def test_space_vs_ground_link_gap(self):
        # equal distance: no rain (+2) and quieter space noise (+20)
        cfg = ChannelParams()
        ss = link_snr(cfg, 1000.0, 1.0, False, cfg.space_noise_db)
        ts = link_snr(cfg, 1000.0, 1.0, True, cfg.surface_noise_db)
        assert ss.snr_db - ts.snr_db == pytest.approx(22.0, abs=1e-12)

    def test_zero_fading_sentinel(self):
        cfg = ChannelParams()
        assert link_snr(cfg, 500.0, 0.0, True, -80.0).snr_db == -np.inf

    def test_monotonicity(self):
        cfg = ChannelParams()
        snr = [link_snr(cfg, d, 1.0, True, -80.0).snr_db for d in (600, 900, 1300)]
        assert snr[0] > snr[1] > snr[2]
        snr_f = [link_snr(cfg, 900.0, h, True, -80.0).snr_db for h in (0.5, 1.0, 2.0)]
        assert snr_f[0] < snr_f[1] < snr_f[2]

    def test_snr_invariant(self):
        cfg = ChannelParams()
        b = link_snr(cfg, 750.0, 1.7, True, -80.0)
        assert b.snr_db == pytest.approx(b.received_power_db - b.noise_db, abs=1e-12)


class TestThresholdCoefficient:
    def test_equivalent_to_db_budget(self):
        gen = np.random.default_rng(9)
        cfg = ChannelParams()
        for gamma in (-5.0, 0.0, 12.0, 30.0):
            c = fading_threshold_coefficient(cfg, cfg.surface_noise_db, gamma, True)
            for _ in range(50):
                D = gen.uniform(550.0, 4000.0)
                h = gen.uniform(0.01, 5.0)
                passes = link_snr(cfg, D, h, True, cfg.surface_noise_db).snr_db >= gamma
                assert passes == (h >= c * D**cfg.path_loss_exponent) or (
                    abs(h - c * D**2) < 1e-12
                )

    def test_vacuous_threshold(self):
        cfg = ChannelParams()
        assert fading_threshold_coefficient(cfg, -80.0, -np.inf, True) == 0.0


def test_db_linear_round_trip():
    xs = np.linspace(-200.0, 200.0, 4001)
    assert np.abs(to_db(to_linear(xs)) - xs).max() < 1e-12


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(path_loss_exponent=5.0)
    with pytest.raises(ValueError):
        ChannelParams(lobe_half_angle=0.0)
    with pytest.raises(ValueError):
        SrParams(omega=-1.0)


def test_sr_mean_closed_form():
    assert sr_mean(TABLE_SR) == pytest.approx(1.606)
