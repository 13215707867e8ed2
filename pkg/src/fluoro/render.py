"""Preview rendering and matrix heatmaps.

The preview is a Lambertian sphere under one directional light plus a
constant ambient term: the shading factor scales the incoming color,
and the outgoing color is the reduced transport of the shaded incoming
color.  This isolates the non-spectral transport rule without any
global illumination machinery.  Split-illuminant renders light the left
and right image halves with different illuminants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import data as _data
from .analytic import FluorescentMaterial, reduce_fluorescence, reduce_fluorescence_batch
from .colorimetry import (
    albedo_to_reduced_R,
    illuminant_to_color,
    illuminant_xyz,
    lift_albedo_U,
    xyz_to_srgb_display,
)
from .reradiation import ReducedRerad
from .spectral import SensitivityBasis, SpectralError, WavelengthGrid

LIGHT_DIR = np.array([0.35, 0.45, 0.82])
AMBIENT = 0.12


@dataclass(frozen=True)
class PreviewScene:
    material: FluorescentMaterial
    illuminant: str = "D65"
    illuminant_right: str | None = None  # split render when set
    size: int = 256
    exposure: float = 1.0
    fluorescence_only: bool = False
    alpha_map: np.ndarray | None = field(default=None, repr=False)  # HxW in [0,1]
    hsv_map: np.ndarray | None = field(default=None, repr=False)  # HxWx3 in [0,1]

    def __post_init__(self):
        if self.size < 2:
            raise SpectralError("preview size must be at least 2 pixels")
        if self.alpha_map is not None:
            m = np.asarray(self.alpha_map, dtype=float)
            if m.ndim != 2:
                raise SpectralError("alpha map must be a 2D texture")
            if np.any(m < 0.0) or np.any(m > 1.0):
                raise SpectralError("alpha map values must lie in [0, 1]")
            object.__setattr__(self, "alpha_map", m)
        if self.hsv_map is not None:
            m = np.asarray(self.hsv_map, dtype=float)
            if m.ndim != 3 or m.shape[2] != 3:
                raise SpectralError("HSV map must be an HxWx3 texture")
            if np.any(m < 0.0) or np.any(m > 1.0):
                raise SpectralError("HSV map values must lie in [0, 1]")
            object.__setattr__(self, "hsv_map", m)


def _shading(size: int) -> np.ndarray:
    """Per-pixel n.l shading of a unit sphere; 0 outside the silhouette."""
    t = np.linspace(-1.0, 1.0, size)
    x, y = np.meshgrid(t, -t)  # image y grows downward
    r2 = x**2 + y**2
    inside = r2 <= 1.0
    z = np.sqrt(np.clip(1.0 - r2, 0.0, None))
    l = LIGHT_DIR / np.linalg.norm(LIGHT_DIR)
    ndotl = np.clip(x * l[0] + y * l[1] + z * l[2], 0.0, None)
    return np.where(inside, ndotl + AMBIENT, 0.0)


def _sample_texture(tex: np.ndarray, size: int) -> np.ndarray:
    """Nearest-neighbor resample of a texture to the render resolution."""
    h, w = tex.shape[:2]
    ri = np.minimum((np.arange(size) * h) // size, h - 1)
    ci = np.minimum((np.arange(size) * w) // size, w - 1)
    return tex[np.ix_(ri, ci)]


def render_sphere(
    scene: PreviewScene, basis: SensitivityBasis | None = None
) -> tuple[np.ndarray, np.ndarray, int]:
    """Returns (XYZ float image, display sRGB image, clipped pixel count)."""
    if basis is None:
        basis = _data.xyzu_basis()
    size = scene.size
    mat = scene.material

    rho_u = lift_albedo_U(mat.albedo[:3])
    R = albedo_to_reduced_R(rho_u, basis).entries
    if scene.hsv_map is not None:
        # per-texel emission parameters driven by an HSV texture; the
        # absorption band comes from the material's first lobe
        from .palette import HsvMapping

        hm = HsvMapping()
        hsv = _sample_texture(scene.hsv_map, size)
        mu_e = hm.mu_from + hsv[..., 0] * (hm.mu_to - hm.mu_from)
        sigma_e = hm.sigma_wide - hsv[..., 1] * (hm.sigma_wide - hm.sigma_narrow)
        lobe = mat.gaussians[0]
        F_tex = reduce_fluorescence_batch(
            lobe.mu_a, lobe.sigma_a, mu_e, sigma_e, hsv[..., 2], basis
        )
    else:
        F_tex = None
        F = reduce_fluorescence(mat, basis).entries

    names = [scene.illuminant, scene.illuminant_right or scene.illuminant]
    shading = _shading(size)
    xyz = np.zeros((size, size, 3))
    white_y = 1.0
    half = size // 2
    col_slices = [slice(0, half), slice(half, size)]
    for name, cols in zip(names, col_slices):
        L = _data.illuminant(name, basis.grid)
        c_i = illuminant_to_color(L, basis)
        white_y = max(white_y, illuminant_xyz(L)[1])
        c_refl = R @ c_i
        c_nonrefl = c_i - c_refl
        if F_tex is not None:
            c_fluo = F_tex[:, cols] @ c_nonrefl
        elif scene.alpha_map is not None:
            a = _sample_texture(scene.alpha_map, size)[:, cols]
            c_fluo = a[..., None] * (F @ c_nonrefl)
        else:
            c_fluo = np.broadcast_to(F @ c_nonrefl, (size, cols.stop - cols.start, basis.K))
        c_o = c_fluo if scene.fluorescence_only else c_refl + c_fluo
        xyz[:, cols] = (shading[:, cols, None] * c_o[..., :3])
    display, clipped = xyz_to_srgb_display(
        xyz, exposure=scene.exposure / max(white_y, 1e-12)
    )
    return xyz, display, clipped


# --- heatmaps ----------------------------------------------------------------


def heatmap(
    matrix: np.ndarray,
    grid: WavelengthGrid | None = None,
    log_scale: bool = False,
    signed: bool | None = None,
) -> np.ndarray:
    """Visualize a reradiation matrix as an RGB image.

    Rows map to the outgoing wavelength with the longest wavelength at
    the top row, columns to the incoming wavelength ascending to the
    right (see :func:`pixel_to_lambda`).  Signed matrices (reduced
    K x K) use blue for positive and red for negative entries; dense
    spectral matrices use a white-on-black intensity ramp.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or not np.all(np.isfinite(m)):
        raise SpectralError("heatmap expects a finite 2D matrix")
    if signed is None:
        signed = bool(np.any(m < 0.0))
    img = np.zeros(m.shape + (3,), dtype=np.uint8)
    disp = np.flipud(m)  # row 0 shows the largest outgoing index
    if signed:
        scale = np.max(np.abs(disp))
        if scale > 0:
            t = disp / scale
            img[..., 2] = np.round(255.0 * np.clip(t, 0.0, 1.0)).astype(np.uint8)
            img[..., 0] = np.round(255.0 * np.clip(-t, 0.0, 1.0)).astype(np.uint8)
    else:
        v = np.log1p(disp / max(np.max(disp), 1e-300) * 1e3) / np.log1p(1e3) if log_scale else disp / max(np.max(disp), 1e-300)
        g = np.round(255.0 * np.clip(v, 0.0, 1.0)).astype(np.uint8)
        img[..., 0] = img[..., 1] = img[..., 2] = g
    return img


def pixel_to_lambda(row: int, col: int, grid: WavelengthGrid) -> tuple[float, float]:
    """(lambda_i, lambda_o) at the center of a heatmap pixel."""
    lam = grid.wavelengths
    return float(lam[col]), float(lam[grid.count - 1 - row])


def lambda_to_pixel(lam_i: float, lam_o: float, grid: WavelengthGrid) -> tuple[int, int]:
    """Inverse of :func:`pixel_to_lambda` at sample centers."""
    return grid.count - 1 - grid.index_of(lam_o), grid.index_of(lam_i)
