import numpy as np
import pytest

from fluoro.analytic import FluorescentMaterial, ModelGaussian, discretize_fbar
from fluoro.data import (
    UV_BAND,
    XBAR_LOBE_1,
    XBAR_LOBE_2,
    YBAR,
    ZBAR,
    illuminant,
    tabulated_cmfs,
)
from fluoro.fitting import (
    EVAL_PATHS,
    EvalReport,
    FitConfig,
    evaluate_dE,
    fit_cmf,
    fit_diagonal,
    fit_fluorescence,
    fit_material,
    interpolate_materials,
    optimize_uv_basis,
)
from fluoro.reradiation import DecomposedRerad, recompose
from fluoro.spectral import DEFAULT_GRID, Spectrum, SpectralError


def material_matrix(mat, rho=0.2):
    fb = discretize_fbar(mat, DEFAULT_GRID)
    d = DecomposedRerad(Spectrum(DEFAULT_GRID, np.full(DEFAULT_GRID.count, rho)), fb)
    return recompose(d)


class TestFitFluorescence:
    def test_single_gaussian_recovery(self):
        mat = FluorescentMaterial(
            np.zeros(3), (ModelGaussian(0.7, 420.0, 25.0, 560.0, 35.0),)
        )
        fit = fit_fluorescence(discretize_fbar(mat, DEFAULT_GRID))
        g = fit.gaussians[0]
        true = mat.gaussians[0].resolved()
        assert abs(g.amplitude - true.amplitude) / true.amplitude <= 0.01
        assert abs(g.mean_a - 420.0) <= 4.2
        assert abs(g.std_a - 25.0) / 25.0 <= 0.01
        assert abs(g.mean_e - 560.0) <= 5.6
        assert abs(g.std_e - 35.0) / 35.0 <= 0.01
        assert not fit.trivial

    def test_zero_input_flagged(self):
        fit = fit_fluorescence(np.zeros((501, 501)))
        assert fit.trivial
        assert fit.residual_rms == 0.0
        assert all(g.amplitude == 0.0 for g in fit.gaussians)

    def test_two_gaussian_nested_residuals(self):
        mat = FluorescentMaterial(
            np.zeros(3),
            (
                ModelGaussian(0.6, 390.0, 22.0, 520.0, 28.0),
                ModelGaussian(0.4, 470.0, 30.0, 630.0, 40.0),
            ),
        )
        fb = discretize_fbar(mat, DEFAULT_GRID)
        f2 = fit_fluorescence(fb, DEFAULT_GRID, FitConfig(Q=2))
        f1 = fit_fluorescence(fb, DEFAULT_GRID, FitConfig(Q=1))
        assert f2.residual_rms <= 1e-6
        assert f1.residual_rms > f2.residual_rms

    def test_deterministic(self):
        mat = FluorescentMaterial(
            np.zeros(3),
            (
                ModelGaussian(0.5, 400.0, 25.0, 540.0, 30.0),
                ModelGaussian(0.5, 460.0, 20.0, 610.0, 25.0),
            ),
        )
        fb = discretize_fbar(mat, DEFAULT_GRID)
        cfg = FitConfig(Q=2, seed=7)
        a = fit_fluorescence(fb, DEFAULT_GRID, cfg)
        b = fit_fluorescence(fb, DEFAULT_GRID, cfg)
        assert a.gaussians == b.gaussians
        assert a.residual_rms == b.residual_rms

    def test_sigma_floor(self):
        # a single hot texel: fitted widths must respect the 1 nm floor
        fb = np.zeros((501, 501))
        fb[DEFAULT_GRID.index_of(550), DEFAULT_GRID.index_of(420)] = 1e-3
        fit = fit_fluorescence(fb)
        g = fit.gaussians[0]
        assert g.std_a >= 1.0 and g.std_e >= 1.0

    def test_bad_q(self):
        with pytest.raises(SpectralError):
            FitConfig(Q=0)
        with pytest.raises(SpectralError):
            FitConfig(Q=5)

    def test_fit_material_strength_clipped(self):
        mat = FluorescentMaterial(
            np.array([0.1, 0.2, 0.3]), (ModelGaussian(1.0, 420.0, 25.0, 560.0, 35.0),)
        )
        back = fit_material(discretize_fbar(mat, DEFAULT_GRID), mat.albedo)
        assert 0.0 <= back.gaussians[0].alpha_bar <= 1.0
        assert back.gaussians[0].alpha_bar == pytest.approx(1.0, abs=1e-3)


class TestFitCmf:
    def test_ybar(self):
        got = fit_cmf(tabulated_cmfs()["y"], 1)[0]
        assert got.amplitude == pytest.approx(YBAR.amplitude, rel=0.02)
        assert got.mean == pytest.approx(YBAR.mean, rel=0.02)
        assert got.std == pytest.approx(YBAR.std, rel=0.02)

    def test_zbar(self):
        got = fit_cmf(tabulated_cmfs()["z"], 1)[0]
        assert got.amplitude == pytest.approx(ZBAR.amplitude, rel=0.02)
        assert got.mean == pytest.approx(ZBAR.mean, rel=0.02)
        assert got.std == pytest.approx(ZBAR.std, rel=0.02)

    def test_xbar_pair(self):
        lo, hi = fit_cmf(tabulated_cmfs()["x"], 2)
        for got, want in ((lo, XBAR_LOBE_1), (hi, XBAR_LOBE_2)):
            assert got.amplitude == pytest.approx(want.amplitude, rel=0.02)
            assert got.mean == pytest.approx(want.mean, rel=0.02)
            assert got.std == pytest.approx(want.std, rel=0.02)

    def test_self_fit_exact(self):
        from fluoro.spectral import discretize

        s = discretize(YBAR, DEFAULT_GRID)
        got = fit_cmf(s, 1)[0]
        assert got.amplitude == pytest.approx(YBAR.amplitude, rel=1e-3)
        assert got.mean == pytest.approx(YBAR.mean, rel=1e-3)
        assert got.std == pytest.approx(YBAR.std, rel=1e-3)


class TestFitDiagonal:
    def test_single_gaussian_recovery(self):
        from fluoro.spectral import Gaussian1D, discretize

        true = Gaussian1D(0.6, 540.0, 60.0)
        dm = fit_diagonal(discretize(true, DEFAULT_GRID))
        # one fitted lobe should carry the mass; compare reconstructions
        lam = DEFAULT_GRID.wavelengths
        assert np.max(np.abs(dm(lam) - true(lam))) <= 0.01 * true.amplitude

    def test_zero_reflectance(self):
        dm = fit_diagonal(Spectrum(DEFAULT_GRID, np.zeros(501)))
        assert all(g.amplitude == 0.0 for g in dm.gaussians)

    def test_constant_half(self):
        dm = fit_diagonal(Spectrum(DEFAULT_GRID, np.full(501, 0.5)))
        lam = DEFAULT_GRID.wavelengths
        mask = (lam >= 360) & (lam <= 760)
        rms = float(np.sqrt(np.mean((dm(lam[mask]) - 0.5) ** 2)))
        assert rms <= 0.02

    def test_out_of_range_rejected(self):
        with pytest.raises(SpectralError):
            fit_diagonal(Spectrum(DEFAULT_GRID, np.full(501, 1.5)))


class TestOptimizeUV:
    def test_empty_dataset(self):
        with pytest.raises(SpectralError):
            optimize_uv_basis([], [illuminant("D65")])

    def test_recovers_uv_absorption_band(self):
        mats = [
            FluorescentMaterial(
                np.zeros(3),
                (ModelGaussian(0.9, UV_BAND.mean, UV_BAND.std, mu_e, 30.0),),
            )
            for mu_e in (500.0, 560.0, 620.0)
        ]
        ds = [material_matrix(m, rho=0.1) for m in mats]
        ills = [illuminant(n) for n in ("D65", "UV", "E")]
        g, flat = optimize_uv_basis(ds, ills)
        assert not flat
        assert abs(g.mean - UV_BAND.mean) <= 10.0

    def test_flat_objective_returns_default(self):
        # a purely reflective material: the UV band never matters
        rho = Spectrum(DEFAULT_GRID, np.full(501, 0.4))
        from fluoro.reradiation import SpectralReradMatrix

        P = SpectralReradMatrix(DEFAULT_GRID, np.diag(rho.values))
        g, flat = optimize_uv_basis(
            [P], [illuminant("E")], mu_values=[360.0, 400.0], sigma_values=[40.0]
        )
        assert flat
        assert g == UV_BAND


class TestEvaluate:
    def setup_method(self):
        self.mat = FluorescentMaterial(
            np.zeros(3),
            (
                ModelGaussian(0.6, 390.0, 22.0, 520.0, 28.0),
                ModelGaussian(0.4, 470.0, 30.0, 630.0, 40.0),
            ),
        )
        self.P = material_matrix(self.mat)

    def test_exact_model_spectral_path_zero(self):
        rep = evaluate_dE([self.P], [self.mat], ["D65", "A"], path="spectral-fit")
        for s in rep.stats.values():
            assert s["max"] == 0.0

    def test_reduced_analytic_small(self):
        rep = evaluate_dE([self.P], [self.mat], ["D65", "A", "UV"], path="reduced-analytic")
        for s in rep.stats.values():
            assert s["mean"] <= 0.5

    def test_stats_ordering(self):
        rng = np.random.default_rng(3)
        mats = [
            FluorescentMaterial(
                np.zeros(3),
                (ModelGaussian(0.5, float(rng.uniform(380, 480)), 25.0,
                               float(rng.uniform(520, 680)), 35.0),),
            )
            for _ in range(5)
        ]
        ds = [material_matrix(m) for m in mats]
        rep = evaluate_dE(ds, mats, ["D65"], path="reduced-analytic")
        s = rep.stats["D65"]
        assert 0.0 <= s["min"] <= s["q1"] <= s["q3"] <= s["max"]
        assert s["min"] <= s["mean"] <= s["max"]

    def test_order_invariance(self):
        mats = [
            self.mat,
            FluorescentMaterial(
                np.zeros(3), (ModelGaussian(0.3, 430.0, 20.0, 580.0, 30.0),)
            ),
        ]
        ds = [material_matrix(m) for m in mats]
        fwd = evaluate_dE(ds, mats, ["D65"], path="reduced-analytic")
        rev = evaluate_dE(ds[::-1], mats[::-1], ["D65"], path="reduced-analytic")
        assert fwd.stats == rev.stats

    def test_unknown_path(self):
        with pytest.raises(SpectralError):
            evaluate_dE([self.P], [self.mat], ["D65"], path="nope")
        assert set(EVAL_PATHS) == {"spectral-fit", "reduced-brute", "reduced-analytic"}


class TestInterpolate:
    def setup_method(self):
        self.a = FluorescentMaterial(
            np.array([0.1, 0.2, 0.3]), (ModelGaussian(0.8, 400.0, 25.0, 500.0, 30.0),)
        )
        self.b = FluorescentMaterial(
            np.array([0.5, 0.5, 0.5]), (ModelGaussian(0.2, 460.0, 35.0, 600.0, 50.0),)
        )

    def test_endpoints(self):
        assert interpolate_materials(self.a, self.b, 0.0).gaussians == self.a.gaussians
        assert interpolate_materials(self.a, self.b, 1.0).gaussians == self.b.gaussians

    def test_midpoint(self):
        mid = interpolate_materials(self.a, self.b, 0.5).gaussians[0]
        assert mid.mu_e == pytest.approx(550.0)
        assert mid.alpha_bar == pytest.approx(0.5)

    def test_albedo_from_first(self):
        assert np.allclose(
            interpolate_materials(self.a, self.b, 0.7).albedo, self.a.albedo
        )

    def test_energy_conserving_sweep(self):
        w = DEFAULT_GRID.trapezoid_weights
        for t in np.linspace(0.0, 1.0, 9):
            m = interpolate_materials(self.a, self.b, float(t))
            fb = discretize_fbar(m, DEFAULT_GRID)
            assert np.max(w @ fb) <= 1.0 + 1e-3

    def test_q_padding(self):
        b2 = FluorescentMaterial(
            np.array([0.5, 0.5, 0.5]),
            (
                ModelGaussian(0.2, 460.0, 35.0, 600.0, 50.0),
                ModelGaussian(0.6, 380.0, 15.0, 540.0, 20.0),
            ),
        )
        m = interpolate_materials(self.a, b2, 0.5)
        assert m.Q == 2
        assert m.gaussians[1].alpha_bar == pytest.approx(0.3)

    def test_t_out_of_range(self):
        with pytest.raises(SpectralError):
            interpolate_materials(self.a, self.b, 1.5)
