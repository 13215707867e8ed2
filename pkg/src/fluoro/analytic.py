"""Gaussian fluorescence model with closed-form reduction.

The normalized fluorescence is a sum of axis-aligned 2D Gaussians over
(absorption, emission) wavelengths, gated by a Heaviside factor so that
energy only moves toward longer wavelengths (H(0) = 0; the diagonal line
has measure zero so integrals are unaffected).

Projecting one such Gaussian onto a pair of 1D Gaussian sensitivity
atoms has a closed form: after per-axis Gaussian products, a pair of
shears turns the triangular-domain integral into an axis-aligned one,

    F_jk = pi * a_jk * s_j * s_k * (1 - erf((m_j - m_k) / sqrt(2 (s_j^2 + s_k^2)))),

where (a_jk, m_j, s_j, m_k, s_k) are the product amplitude and the
per-axis product means/stds (j = absorption axis, k = emission axis).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .reradiation import ReducedRerad
from .spectral import (
    Gaussian1D,
    Gaussian2D,
    SensitivityBasis,
    SpectralError,
    WavelengthGrid,
)

#: Cap for the intensity bound when the emission parameters degenerate.
ALPHA_MAX_CAP = 1e6


@dataclass(frozen=True)
class ModelGaussian:
    """One fluorescence lobe with artist-facing strength in [0, 1]."""

    alpha_bar: float
    mu_a: float
    sigma_a: float
    mu_e: float
    sigma_e: float

    def __post_init__(self):
        if not 0.0 <= self.alpha_bar <= 1.0:
            raise SpectralError(f"alpha_bar must be in [0, 1], got {self.alpha_bar}")
        if self.sigma_a <= 0 or self.sigma_e <= 0:
            raise SpectralError("sigma_a and sigma_e must be positive")

    @property
    def resolved_alpha(self) -> float:
        """Physical peak intensity: alpha_bar times the conservative bound."""
        return self.alpha_bar * alpha_max_conservative(self.mu_e, self.sigma_e)

    def resolved(self) -> Gaussian2D:
        return Gaussian2D(self.resolved_alpha, self.mu_a, self.sigma_a, self.mu_e, self.sigma_e)


@dataclass(frozen=True)
class FluorescentMaterial:
    """Albedo color plus a small set of fluorescence lobes."""

    albedo: np.ndarray  # XYZ (3,) or XYZU (4,)
    gaussians: tuple[ModelGaussian, ...]
    notes: str = ""

    def __post_init__(self):
        a = np.asarray(self.albedo, dtype=float)
        if a.shape not in ((3,), (4,)):
            raise SpectralError(f"albedo must have 3 or 4 channels, got {a.shape}")
        if np.any(a[:3] < 0.0) or np.any(a[:3] > 1.0):
            raise SpectralError("albedo XYZ channels must lie in [0, 1]")
        object.__setattr__(self, "albedo", a)
        if not self.gaussians:
            raise SpectralError("material needs at least one fluorescence lobe")

    @property
    def Q(self) -> int:
        return len(self.gaussians)

    def to_json(self) -> str:
        return json.dumps(
            {
                "albedo_xyz": list(self.albedo[:3]),
                "gaussians": [
                    {
                        "alpha_bar": g.alpha_bar,
                        "mu_a_nm": g.mu_a,
                        "sigma_a_nm": g.sigma_a,
                        "mu_e_nm": g.mu_e,
                        "sigma_e_nm": g.sigma_e,
                    }
                    for g in self.gaussians
                ],
                "notes": self.notes,
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "FluorescentMaterial":
        d = json.loads(text)
        gs = tuple(
            ModelGaussian(
                g["alpha_bar"], g["mu_a_nm"], g["sigma_a_nm"], g["mu_e_nm"], g["sigma_e_nm"]
            )
            for g in d["gaussians"]
        )
        return FluorescentMaterial(
            np.asarray(d["albedo_xyz"], dtype=float), gs, d.get("notes", "")
        )


@dataclass(frozen=True)
class DiagonalModel:
    """Sum of up to six 1D Gaussians approximating the reflectance diagonal."""

    gaussians: tuple[Gaussian1D, ...]

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam, dtype=float)
        for g in self.gaussians:
            out = out + g(lam)
        return out


# --- model evaluation -------------------------------------------------------


def eval_fbar(mat: FluorescentMaterial, lam_i, lam_o):
    """Normalized fluorescence density; zero on and below the diagonal."""
    lam_i = np.asarray(lam_i, dtype=float)
    lam_o = np.asarray(lam_o, dtype=float)
    total = np.zeros(np.broadcast(lam_i, lam_o).shape)
    for g in mat.gaussians:
        total = total + g.resolved()(lam_i, lam_o)
    return np.where(lam_o > lam_i, total, 0.0)


def discretize_fbar(mat: FluorescentMaterial, grid: WavelengthGrid) -> np.ndarray:
    """N x N density matrix indexed [lambda_o, lambda_i]."""
    lam = grid.wavelengths
    return eval_fbar(mat, lam[None, :], lam[:, None])


# --- closed-form reduction --------------------------------------------------


def shear_parameters(alpha_jk, mu_j, sigma_j, mu_k, sigma_k):
    """Sheared-frame diagonal covariance and mean of the product Gaussian.

    The two shears keep the space measure (they are unimodular) and map
    the reradiation boundary to a coordinate half-plane, so
    det(Sigma_hat) = sigma_j^2 sigma_k^2 always holds.
    """
    vj, vk = sigma_j**2, sigma_k**2
    sigma_hat = np.array([vj + vk, vj * vk / (vj + vk)])
    mu_hat = np.array([mu_j - mu_k, (vj * mu_k + vk * mu_j) / (vj + vk)])
    return sigma_hat, mu_hat


def reduce_pair_closed_form(fluo: Gaussian2D, g_j: Gaussian1D, g_k: Gaussian1D) -> float:
    """Exact integral of fluo * g_j(lambda_i) * g_k(lambda_o) over the
    reradiating half-plane lambda_o > lambda_i."""
    pa = _product_params(fluo.mean_a, fluo.std_a, g_j)
    pe = _product_params(fluo.mean_e, fluo.std_e, g_k)
    a_jk = fluo.amplitude * g_j.amplitude * g_k.amplitude * pa[2] * pe[2]
    mu_j, sigma_j = pa[0], pa[1]
    mu_k, sigma_k = pe[0], pe[1]
    z = (mu_j - mu_k) / math.sqrt(2.0 * (sigma_j**2 + sigma_k**2))
    return math.pi * a_jk * sigma_j * sigma_k * (1.0 - erf(z))


def _product_params(mean, std, g: Gaussian1D):
    """Per-axis Gaussian product: (mean, std, amplitude-mismatch factor).

    The returned factor excludes the two input amplitudes.
    """
    v1, v2 = std**2, g.std**2
    var = v1 * v2 / (v1 + v2)
    mu = var * (mean / v1 + g.mean / v2)
    damp = math.exp(-((mean - g.mean) ** 2) / (2.0 * (v1 + v2)))
    return mu, math.sqrt(var), damp


def reduce_fluorescence(mat: FluorescentMaterial, basis: SensitivityBasis) -> ReducedRerad:
    """Closed-form reduced normalized fluorescence matrix (K x K).

    Assembles atom-pair integrals into A[e_atom, a_atom], then transfers
    and dualizes: Fbar = T^T A T C, matching the brute-force projection
    S^T(out) fbar S_dual(in).
    """
    M = len(basis.atoms)
    A = np.zeros((M, M))
    for q in mat.gaussians:
        fluo = q.resolved()
        if fluo.amplitude == 0.0:
            continue
        for me, g_e in enumerate(basis.atoms):
            for ma, g_a in enumerate(basis.atoms):
                A[me, ma] += reduce_pair_closed_form(fluo, g_a, g_e)
    entries = basis.transfer.T @ A @ basis.transfer @ basis.C
    return ReducedRerad(entries, basis.labels)


def reduce_fluorescence_batch(
    mu_a, sigma_a, mu_e, sigma_e, alpha_bar, basis: SensitivityBasis
) -> np.ndarray:
    """Vectorized single-lobe reduction for arrays of parameters.

    Returns an array of shape (..., K, K).  Used by palette generation
    and per-texel rendering, where thousands of parameter sets share one
    basis.
    """
    mu_a, sigma_a, mu_e, sigma_e, alpha_bar = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (mu_a, sigma_a, mu_e, sigma_e, alpha_bar))
    )
    alpha = alpha_bar * alpha_max_conservative_arr(mu_e, sigma_e)
    M = len(basis.atoms)
    A = np.zeros(mu_a.shape + (M, M))
    va, ve = sigma_a**2, sigma_e**2
    for me, g_e in enumerate(basis.atoms):
        vk = g_e.std**2
        var_e = ve * vk / (ve + vk)
        mu_k = var_e * (mu_e / ve + g_e.mean / vk)
        damp_e = np.exp(-((mu_e - g_e.mean) ** 2) / (2.0 * (ve + vk)))
        for ma, g_a in enumerate(basis.atoms):
            vj = g_a.std**2
            var_a = va * vj / (va + vj)
            mu_j = var_a * (mu_a / va + g_a.mean / vj)
            damp_a = np.exp(-((mu_a - g_a.mean) ** 2) / (2.0 * (va + vj)))
            a_jk = alpha * g_a.amplitude * g_e.amplitude * damp_a * damp_e
            z = (mu_j - mu_k) / np.sqrt(2.0 * (var_a + var_e))
            A[..., me, ma] = (
                math.pi * a_jk * np.sqrt(var_a * var_e) * (1.0 - erf(z))
            )
    return basis.transfer.T @ A @ basis.transfer @ basis.C


def reduce_diagonal_analytic(diag: DiagonalModel, basis: SensitivityBasis) -> ReducedRerad:
    """Reduced reflectance of a Gaussian diagonal model, in closed form.

    Each entry is a triple-Gaussian product integrated over the real
    line (single measure: the diagonal is a delta line).
    """
    M = len(basis.atoms)
    B = np.zeros((M, M))
    for p in diag.gaussians:
        for m, g_m in enumerate(basis.atoms):
            gp = _product_1d(g_m, p)
            for n, g_n in enumerate(basis.atoms):
                B[m, n] += _gauss_integral_product(gp, g_n)
    entries = basis.transfer.T @ B @ basis.transfer @ basis.C
    return ReducedRerad(entries, basis.labels)


def _product_1d(g1: Gaussian1D, g2: Gaussian1D) -> Gaussian1D:
    v1, v2 = g1.std**2, g2.std**2
    var = v1 * v2 / (v1 + v2)
    mu = var * (g1.mean / v1 + g2.mean / v2)
    amp = g1.amplitude * g2.amplitude * math.exp(
        -((g1.mean - g2.mean) ** 2) / (2.0 * (v1 + v2))
    )
    return Gaussian1D(amp, mu, math.sqrt(var)) if amp > 0 else Gaussian1D(0.0, mu, math.sqrt(var))


def _gauss_integral_product(g1: Gaussian1D, g2: Gaussian1D) -> float:
    return _product_1d(g1, g2).integral()


# --- energy conservation bounds --------------------------------------------


def alpha_max_conservative(mu_e: float, sigma_e: float) -> float:
    """Analytic intensity bound ignoring the reradiation boundary.

    Always at or below the numeric bound; tight when the emission lobe
    sits well above the diagonal.
    """
    return float(alpha_max_conservative_arr(np.asarray(mu_e), np.asarray(sigma_e)))


def alpha_max_conservative_arr(mu_e, sigma_e):
    denom = math.sqrt(math.pi / 2.0) * sigma_e * (1.0 + erf(mu_e / (np.sqrt(2.0) * sigma_e)))
    with np.errstate(divide="ignore"):
        out = np.where(denom > 1.0 / ALPHA_MAX_CAP, 1.0 / np.maximum(denom, 1e-300), ALPHA_MAX_CAP)
    return np.minimum(out, ALPHA_MAX_CAP)


def alpha_max_numeric(
    mu_a: float, sigma_a: float, mu_e: float, sigma_e: float, grid: WavelengthGrid
) -> float:
    """Dense-quadrature intensity bound (test oracle).

    1 / max over lambda_i in the grid range of the unit-intensity
    reradiated-energy spectrum; the tail integral over lambda_o > lambda_i
    uses a cumulative trapezoid on a refined grid.
    """
    step = min(sigma_a, sigma_e, grid.step) / 64.0
    lo = grid.lambda_min
    hi = max(grid.lambda_max, mu_e + 12.0 * sigma_e)
    lam = np.arange(lo, hi + step, step)
    g_e = np.exp(-((lam - mu_e) ** 2) / (2.0 * sigma_e**2))
    # tail[i] = integral of g_e from lam[i] to hi (trapezoid)
    seg = 0.5 * (g_e[1:] + g_e[:-1]) * np.diff(lam)
    tail = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    lam_i = lam[lam <= grid.lambda_max]
    g_a = np.exp(-((lam_i - mu_a) ** 2) / (2.0 * sigma_a**2))
    absorbed = g_a * tail[: len(lam_i)]
    peak = float(np.max(absorbed))
    if peak <= 1.0 / ALPHA_MAX_CAP:
        return ALPHA_MAX_CAP
    return min(1.0 / peak, ALPHA_MAX_CAP)
