import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluoro.analytic import (
    ALPHA_MAX_CAP,
    DiagonalModel,
    FluorescentMaterial,
    ModelGaussian,
    alpha_max_conservative,
    alpha_max_numeric,
    discretize_fbar,
    eval_fbar,
    reduce_diagonal_analytic,
    reduce_fluorescence,
    reduce_fluorescence_batch,
    reduce_pair_closed_form,
    shear_parameters,
)
from fluoro.reradiation import reduce_matrix
from fluoro.spectral import DEFAULT_GRID, Gaussian1D, Gaussian2D, SpectralError


def quadrature_pair(fluo, g_a, g_e, n=4001, lo=100.0, hi=1100.0):
    """Brute-force oracle for the half-plane atom-pair integral.

    Per incoming column the outgoing trapezoid starts exactly at the
    excitation wavelength, so the diagonal node gets half weight with the
    density's one-sided limit (no step-size boundary bias).
    """
    lam = np.linspace(lo, hi, n)
    step = lam[1] - lam[0]
    w = np.full(n, step)
    w[0] = w[-1] = step / 2.0
    F = fluo(lam[None, :], lam[:, None])  # [o, i], no Heaviside
    diff = lam[:, None] - lam[None, :]
    mask = np.where(diff > 0, 1.0, np.where(diff == 0, 0.5, 0.0))
    return float((w * g_e(lam)) @ (F * mask) @ (w * g_a(lam)))


class TestEvalFbar:
    def setup_method(self):
        self.mat = FluorescentMaterial(
            np.array([0.3, 0.3, 0.3]), (ModelGaussian(1.0, 400.0, 30.0, 550.0, 40.0),)
        )

    def test_peak_value(self):
        expected = alpha_max_conservative(550.0, 40.0)
        assert eval_fbar(self.mat, 400.0, 550.0) == pytest.approx(expected, rel=1e-12)

    def test_zero_on_and_below_diagonal(self):
        assert eval_fbar(self.mat, 500.0, 500.0) == 0.0
        assert eval_fbar(self.mat, 500.0, 450.0) == 0.0

    def test_strictly_positive_above(self):
        assert eval_fbar(self.mat, 400.0, 401.0) > 0.0

    def test_matrix_layout(self):
        fb = discretize_fbar(self.mat, DEFAULT_GRID)
        assert fb.shape == (501, 501)
        # [o, i]: excitation 400 -> emission 550 lives at row 550, col 400
        o, i = DEFAULT_GRID.index_of(550), DEFAULT_GRID.index_of(400)
        assert fb[o, i] > 0.0
        assert fb[i, o] == 0.0
        assert np.all(np.triu(fb) == 0.0)

    def test_multi_lobe_additivity(self):
        g1 = ModelGaussian(0.5, 380.0, 20.0, 520.0, 30.0)
        g2 = ModelGaussian(0.8, 450.0, 25.0, 620.0, 35.0)
        m1 = FluorescentMaterial(np.array([0.1, 0.1, 0.1]), (g1,))
        m2 = FluorescentMaterial(np.array([0.1, 0.1, 0.1]), (g2,))
        m12 = FluorescentMaterial(np.array([0.1, 0.1, 0.1]), (g1, g2))
        lam_i, lam_o = 420.0, 565.0
        assert eval_fbar(m12, lam_i, lam_o) == pytest.approx(
            eval_fbar(m1, lam_i, lam_o) + eval_fbar(m2, lam_i, lam_o)
        )


class TestModelGaussian:
    def test_alpha_bar_range_enforced(self):
        with pytest.raises(SpectralError):
            ModelGaussian(1.5, 400, 30, 550, 40)
        with pytest.raises(SpectralError):
            ModelGaussian(-0.1, 400, 30, 550, 40)

    def test_nonpositive_sigma_rejected(self):
        with pytest.raises(SpectralError):
            ModelGaussian(0.5, 400, 0.0, 550, 40)

    def test_resolved_alpha_scaling(self):
        g1 = ModelGaussian(1.0, 400, 30, 550, 40)
        g2 = ModelGaussian(0.25, 400, 30, 550, 40)
        assert g2.resolved_alpha == pytest.approx(0.25 * g1.resolved_alpha)

    def test_json_round_trip(self):
        mat = FluorescentMaterial(
            np.array([0.2, 0.4, 0.6]),
            (
                ModelGaussian(0.5, 380, 20, 520, 30),
                ModelGaussian(0.9, 450, 25, 620, 35),
            ),
            notes="test sample",
        )
        back = FluorescentMaterial.from_json(mat.to_json())
        assert np.allclose(back.albedo, mat.albedo)
        assert back.gaussians == mat.gaussians
        assert back.notes == "test sample"

    def test_albedo_range_enforced(self):
        with pytest.raises(SpectralError):
            FluorescentMaterial(
                np.array([1.2, 0.2, 0.2]), (ModelGaussian(0.5, 400, 30, 550, 40),)
            )


class TestShearParameters:
    def test_determinant_preserved(self):
        sigma_hat, _ = shear_parameters(1.0, 420.0, 18.0, 530.0, 33.0)
        assert sigma_hat[0] * sigma_hat[1] == pytest.approx(18.0**2 * 33.0**2, rel=1e-12)

    def test_mean_offset_axis(self):
        _, mu_hat = shear_parameters(1.0, 420.0, 18.0, 530.0, 33.0)
        assert mu_hat[0] == pytest.approx(420.0 - 530.0)

    def test_equal_sigmas_mean_average(self):
        _, mu_hat = shear_parameters(1.0, 400.0, 25.0, 560.0, 25.0)
        assert mu_hat[1] == pytest.approx(0.5 * (400.0 + 560.0))

    @given(
        mu_j=st.floats(300, 800),
        sigma_j=st.floats(5, 100),
        mu_k=st.floats(300, 800),
        sigma_k=st.floats(5, 100),
    )
    @settings(max_examples=60)
    def test_determinant_invariant(self, mu_j, sigma_j, mu_k, sigma_k):
        sigma_hat, _ = shear_parameters(1.0, mu_j, sigma_j, mu_k, sigma_k)
        det = sigma_hat[0] * sigma_hat[1]
        expected = sigma_j**2 * sigma_k**2
        assert abs(det - expected) <= 1e-12 * expected


class TestClosedFormPair:
    def test_against_quadrature(self):
        fluo = Gaussian2D(0.01, 420.0, 25.0, 560.0, 35.0)
        g_a = Gaussian1D(1.0, 443.412226, 20.838149)
        g_e = Gaussian1D(1.024335, 560.186336, 43.898132)
        got = reduce_pair_closed_form(fluo, g_a, g_e)
        want = quadrature_pair(fluo, g_a, g_e)
        assert got == pytest.approx(want, rel=1e-5)

    def test_diagonal_straddling_case(self):
        # absorption and emission lobes overlapping the diagonal: the erf
        # factor matters, a full-plane product integral would be wrong.
        fluo = Gaussian2D(0.01, 500.0, 40.0, 510.0, 40.0)
        g_a = Gaussian1D(1.0, 505.0, 50.0)
        g_e = Gaussian1D(1.0, 505.0, 50.0)
        got = reduce_pair_closed_form(fluo, g_a, g_e)
        want = quadrature_pair(fluo, g_a, g_e, n=8001)
        assert got == pytest.approx(want, rel=1e-5)
        full_plane = 2.0 * math.pi * 0.01 * (40 * 50 / math.hypot(40, 50)) ** 2
        assert got < full_plane  # the boundary removes mass

    def test_zero_amplitude(self):
        fluo = Gaussian2D(0.0, 420.0, 25.0, 560.0, 35.0)
        assert reduce_pair_closed_form(fluo, Gaussian1D(1, 450, 30), Gaussian1D(1, 550, 30)) == 0.0

    @given(
        mu_a=st.floats(350, 700),
        sigma_a=st.floats(8, 60),
        mu_e=st.floats(400, 750),
        sigma_e=st.floats(8, 60),
        mu_j=st.floats(350, 700),
        sigma_j=st.floats(10, 60),
        mu_k=st.floats(350, 750),
        sigma_k=st.floats(10, 60),
    )
    @settings(max_examples=40, deadline=None)
    def test_property_against_quadrature(
        self, mu_a, sigma_a, mu_e, sigma_e, mu_j, sigma_j, mu_k, sigma_k
    ):
        fluo = Gaussian2D(1e-3, mu_a, sigma_a, mu_e, sigma_e)
        g_a = Gaussian1D(1.0, mu_j, sigma_j)
        g_e = Gaussian1D(1.0, mu_k, sigma_k)
        got = reduce_pair_closed_form(fluo, g_a, g_e)
        want = quadrature_pair(fluo, g_a, g_e, n=6001, lo=0.0, hi=1400.0)
        scale = 1e-3 * math.pi * sigma_a * sigma_e  # magnitude of the unclipped integral
        assert abs(got - want) <= 1e-5 * scale + 1e-5 * abs(want)


class TestReduceFluorescence:
    def test_matches_brute_force(self, basis_xyzu):
        mat = FluorescentMaterial(
            np.array([0.2, 0.3, 0.1]), (ModelGaussian(0.6, 420.0, 25.0, 560.0, 35.0),)
        )
        analytic = reduce_fluorescence(mat, basis_xyzu).entries
        brute = reduce_matrix(discretize_fbar(mat, DEFAULT_GRID), basis_xyzu).entries
        assert np.max(np.abs(analytic - brute)) <= 1e-4

    def test_two_lobes_additive(self, basis_xyzu):
        g1 = ModelGaussian(0.5, 380.0, 20.0, 520.0, 30.0)
        g2 = ModelGaussian(0.8, 450.0, 25.0, 620.0, 35.0)
        a = np.array([0.1, 0.1, 0.1])
        lhs = reduce_fluorescence(FluorescentMaterial(a, (g1, g2)), basis_xyzu).entries
        rhs = (
            reduce_fluorescence(FluorescentMaterial(a, (g1,)), basis_xyzu).entries
            + reduce_fluorescence(FluorescentMaterial(a, (g2,)), basis_xyzu).entries
        )
        assert np.allclose(lhs, rhs, atol=1e-14)

    def test_zero_strength_lobe_is_zero(self, basis_xyzu):
        mat = FluorescentMaterial(
            np.array([0.5, 0.5, 0.5]), (ModelGaussian(0.0, 420.0, 25.0, 560.0, 35.0),)
        )
        assert np.all(reduce_fluorescence(mat, basis_xyzu).entries == 0.0)

    def test_batch_matches_loop(self, basis_xyzu, rng):
        n = 16
        mu_a = rng.uniform(360, 520, n)
        sigma_a = rng.uniform(10, 50, n)
        mu_e = rng.uniform(480, 700, n)
        sigma_e = rng.uniform(10, 60, n)
        ab = rng.uniform(0.05, 1.0, n)
        batch = reduce_fluorescence_batch(mu_a, sigma_a, mu_e, sigma_e, ab, basis_xyzu)
        assert batch.shape == (n, 4, 4)
        for i in range(n):
            mat = FluorescentMaterial(
                np.zeros(3),
                (ModelGaussian(ab[i], mu_a[i], sigma_a[i], mu_e[i], sigma_e[i]),),
            )
            loop = reduce_fluorescence(mat, basis_xyzu).entries
            assert np.max(np.abs(batch[i] - loop)) <= 1e-12 * max(1.0, np.max(np.abs(loop)))


class TestReduceDiagonal:
    def test_matches_brute_force(self, basis_xyzu):
        diag = DiagonalModel(
            (Gaussian1D(0.4, 450.0, 40.0), Gaussian1D(0.5, 620.0, 60.0))
        )
        analytic = reduce_diagonal_analytic(diag, basis_xyzu).entries
        from fluoro.reradiation import SpectralReradMatrix

        rho = np.clip(diag(DEFAULT_GRID.wavelengths), 0.0, 1.0)
        brute = reduce_matrix(
            SpectralReradMatrix(DEFAULT_GRID, np.diag(rho)), basis_xyzu
        ).entries
        assert np.max(np.abs(analytic - brute)) <= 1e-4 * max(1.0, np.max(np.abs(brute)))


class TestAlphaBounds:
    def test_reference_value(self):
        # emission lobe far from the short-wave end: the bound approaches
        # the reciprocal full-line Gaussian integral 1/(sigma sqrt(2 pi)).
        v = alpha_max_conservative(650.0, 60.0)
        assert v == pytest.approx(6.649038e-3, rel=1e-4)
        assert v == pytest.approx(1.0 / (60.0 * math.sqrt(2 * math.pi)), rel=1e-6)

    def test_conservative_not_above_numeric(self, rng):
        for _ in range(50):
            mu_a = rng.uniform(310, 700)
            sigma_a = rng.uniform(5, 80)
            mu_e = rng.uniform(mu_a, 790)
            sigma_e = rng.uniform(5, 80)
            cons = alpha_max_conservative(mu_e, sigma_e)
            num = alpha_max_numeric(mu_a, sigma_a, mu_e, sigma_e, DEFAULT_GRID)
            assert cons <= num * (1 + 1e-9)

    def test_cap_applies(self):
        assert alpha_max_conservative(-1e5, 1.0) == ALPHA_MAX_CAP

    def test_unit_strength_rows_bounded(self, rng):
        # resolved amplitude from alpha_bar = 1 must keep every column's
        # reradiated energy at or below one on the grid.
        w = DEFAULT_GRID.trapezoid_weights
        for _ in range(30):
            mu_a = rng.uniform(320, 700)
            sigma_a = rng.uniform(5, 80)
            mu_e = rng.uniform(mu_a, 780)
            sigma_e = rng.uniform(5, 80)
            mat = FluorescentMaterial(
                np.zeros(3), (ModelGaussian(1.0, mu_a, sigma_a, mu_e, sigma_e),)
            )
            fb = discretize_fbar(mat, DEFAULT_GRID)
            col_energy = w @ fb
            assert np.max(col_energy) <= 1.0 + 1e-3
