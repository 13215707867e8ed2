"""Fluorescence palettes over emission parameters and HSV parameter maps.

A palette shows, for a fixed albedo, absorption band and illuminant, the
outgoing color obtained at maximum fluorescence strength for every
``(mu_e, sigma_e)`` pair on a regular grid.  Picking a cell returns the
exact parameters that produced its color, so palette selection and
re-rendering round-trip bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import data as _data
from .analytic import alpha_max_conservative_arr, reduce_fluorescence_batch
from .colorimetry import (
    albedo_to_reduced_R,
    illuminant_to_color,
    illuminant_xyz,
    lift_albedo_U,
    xyz_to_srgb_display,
)
from .spectral import SensitivityBasis, SpectralError, Spectrum


@dataclass(frozen=True)
class PaletteContext:
    """Everything held fixed while the emission parameters vary."""

    albedo_xyz: np.ndarray
    illuminant: str = "D65"
    mu_a: float = 420.0
    sigma_a: float = 100.0
    alpha_bar: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.albedo_xyz, dtype=float)
        if a.shape != (3,) or np.any(a < 0.0) or np.any(a > 1.0):
            raise SpectralError("palette albedo must be an XYZ triple in [0, 1]")
        object.__setattr__(self, "albedo_xyz", a)
        if self.sigma_a <= 0:
            raise SpectralError("sigma_a must be positive")


@dataclass(frozen=True)
class Palette:
    context: PaletteContext
    mu_e: np.ndarray  # per column, ascending
    sigma_e: np.ndarray  # per row, ascending
    colors_xyz: np.ndarray = field(repr=False)  # rows x cols x 3
    pixels: np.ndarray = field(repr=False)  # rows x cols x 3 uint8
    resolved_alpha: np.ndarray = field(repr=False)  # rows x cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[:2]


def generate_palette(
    ctx: PaletteContext,
    mu_e_range: tuple[float, float] = (380.0, 720.0),
    sigma_e_range: tuple[float, float] = (5.0, 120.0),
    resolution: tuple[int, int] = (64, 64),
    basis: SensitivityBasis | None = None,
    fluorescence_only: bool = False,
    exposure: float = 1.0,
) -> Palette:
    """Evaluate the reduced transport for every emission-parameter cell.

    Rows sweep ``sigma_e`` (ascending downward), columns sweep ``mu_e``.
    Each cell resolves its physical intensity from the conservative
    energy bound, so every displayed color is energy-conserving.
    """
    rows, cols = resolution
    if rows < 1 or cols < 1:
        raise SpectralError("palette resolution must be at least 1x1")
    if not (300.0 <= mu_e_range[0] < mu_e_range[1] <= 800.0):
        raise SpectralError("mu_e range must be increasing within [300, 800] nm")
    if not (1.0 <= sigma_e_range[0] < sigma_e_range[1] <= 200.0):
        raise SpectralError("sigma_e range must be increasing within [1, 200] nm")
    if basis is None:
        basis = _data.xyzu_basis()

    mu_e = np.linspace(mu_e_range[0], mu_e_range[1], cols)
    sigma_e = np.linspace(sigma_e_range[0], sigma_e_range[1], rows)
    mu_grid, sig_grid = np.meshgrid(mu_e, sigma_e)  # rows x cols

    rho_u = lift_albedo_U(ctx.albedo_xyz)
    R = albedo_to_reduced_R(rho_u, basis).entries
    L = _data.illuminant(ctx.illuminant, basis.grid)
    c_i = illuminant_to_color(L, basis)
    c_nonrefl = c_i - R @ c_i

    F = reduce_fluorescence_batch(
        ctx.mu_a, ctx.sigma_a, mu_grid, sig_grid, ctx.alpha_bar, basis
    )  # rows x cols x K x K
    c_fluo = F @ c_nonrefl
    c_refl = np.broadcast_to(R @ c_i, c_fluo.shape)
    c_o = c_fluo if fluorescence_only else c_refl + c_fluo
    colors_xyz = np.ascontiguousarray(c_o[..., :3])

    # normalize display against the illuminant's own luminance
    white_y = illuminant_xyz(L)[1]
    pixels, _ = xyz_to_srgb_display(colors_xyz, exposure=exposure / max(white_y, 1e-12))
    alpha = ctx.alpha_bar * alpha_max_conservative_arr(mu_grid, sig_grid)
    return Palette(ctx, mu_e, sigma_e, colors_xyz, pixels, alpha)


def pick(palette: Palette, row: int, col: int) -> tuple[float, float, float]:
    """Exact cell parameters: (mu_e, sigma_e, resolved intensity)."""
    rows, cols = palette.shape
    if not (0 <= row < rows and 0 <= col < cols):
        raise SpectralError(f"cell ({row}, {col}) outside palette {rows}x{cols}")
    return (
        float(palette.mu_e[col]),
        float(palette.sigma_e[row]),
        float(palette.resolved_alpha[row, col]),
    )


# --- HSV-driven parameter maps ----------------------------------------------


@dataclass(frozen=True)
class HsvMapping:
    """Affine maps from HSV to emission parameters.

    Hue runs from ``mu_from`` to ``mu_to`` (default descending so red
    hues land on long wavelengths), saturation narrows the emission band
    from ``sigma_wide`` down to ``sigma_narrow``, value scales strength.
    """

    mu_from: float = 620.0
    mu_to: float = 420.0
    sigma_narrow: float = 10.0
    sigma_wide: float = 120.0


def hsv_to_params(
    h: float, s: float, v: float, mapping: HsvMapping = HsvMapping()
) -> tuple[float, float, float]:
    """Map an HSV triple to (mu_e, sigma_e, alpha_bar)."""
    if not (0.0 <= h < 1.0 + 1e-12 and 0.0 <= s <= 1.0 and 0.0 <= v <= 1.0):
        raise SpectralError("HSV components must lie in [0, 1]")
    mu_e = mapping.mu_from + h * (mapping.mu_to - mapping.mu_from)
    sigma_e = mapping.sigma_wide - s * (mapping.sigma_wide - mapping.sigma_narrow)
    return float(mu_e), float(sigma_e), float(v)


# --- chromaticity helpers ----------------------------------------------------


def _xy(c_xyz) -> np.ndarray:
    c = np.asarray(c_xyz, dtype=float)
    s = c.sum()
    if s <= 0:
        raise SpectralError("chromaticity undefined for non-positive XYZ sum")
    return c[:2] / s


def excitation_purity(c_xyz, white_xyz, grid=None) -> float:
    """Distance from the white point toward the spectral locus, in [0, 1].

    The locus is sampled from the shipped color-matching tables; the
    dominant direction is the locus point best aligned with the color's
    offset from white.
    """
    from .spectral import DEFAULT_GRID

    grid = grid or DEFAULT_GRID
    cmfs = _data.tabulated_cmfs(grid)
    xyz = np.stack([cmfs["x"].values, cmfs["y"].values, cmfs["z"].values], axis=1)
    sums = xyz.sum(axis=1)
    ok = sums > 1e-9
    locus = xyz[ok, :2] / sums[ok, None]

    w = _xy(white_xyz)
    c = _xy(c_xyz)
    d = c - w
    n = np.linalg.norm(d)
    if n < 1e-12:
        return 0.0
    ld = locus - w
    ln = np.linalg.norm(ld, axis=1)
    cos = (ld @ d) / (np.maximum(ln, 1e-12) * n)
    best = int(np.argmax(cos))
    return float(min(1.0, n / max(ln[best], 1e-12)))
