"""Color spaces, illuminant projection, transfer matrices and CIEDE2000.

Relative colorimetry throughout: Lab conversions use the illuminant's
own XYZ as white, so color differences under a common illuminant are
meaningful across materials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import data
from .reradiation import ReducedRerad
from .spectral import SensitivityBasis, SpectralError, Spectrum

# XYZU -> XYZ projection: drop the UV channel.
T_XYZU_TO_XYZ = np.hstack([np.eye(3), np.zeros((3, 1))])

# XYZ -> XYZU albedo lift; rows 1-3 keep XYZ, the last row derives the
# UV channel from the overlap of the sensitivity functions.
T_U_DEFAULT = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-0.0145415, 0.0267372, 0.397627],
    ]
)


@dataclass(frozen=True)
class Color:
    channels: np.ndarray
    space: str  # "XYZ" or "XYZU"

    def __post_init__(self):
        c = np.asarray(self.channels, dtype=float)
        expected = {"XYZ": 3, "XYZU": 4}.get(self.space)
        if expected is None:
            raise SpectralError(f"unknown color space {self.space!r}")
        if c.shape != (expected,):
            raise SpectralError(f"{self.space} color needs {expected} channels")
        if not np.all(np.isfinite(c)):
            raise SpectralError("color has non-finite channels")
        object.__setattr__(self, "channels", c)


def illuminant_to_color(L: Spectrum, basis: SensitivityBasis) -> np.ndarray:
    """Project an SPD onto the basis: c = S^T W L."""
    if L.grid != basis.grid:
        raise SpectralError("illuminant grid does not match basis grid")
    w = basis.weights
    return basis.S.T @ (w * L.values)


def illuminant_xyz(L: Spectrum, grid=None) -> np.ndarray:
    """Reference XYZ of an SPD via the shipped tabulated CMFs."""
    cmfs = data.tabulated_cmfs(L.grid)
    w = L.grid.trapezoid_weights
    return np.array([float(cmfs[c].values @ (w * L.values)) for c in ("x", "y", "z")])


_RK_CACHE: dict[str, np.ndarray] = {}


def reflectance_modes(basis: SensitivityBasis) -> np.ndarray:
    """Per-channel reduced reflectance matrices R_k = S^T diag(S_dual_k) S_dual.

    Cached per basis; an albedo color then reduces as sum_k rho_k R_k.
    """
    key = basis.content_hash()
    if key not in _RK_CACHE:
        w = basis.weights
        K = basis.K
        modes = np.empty((K, K, K))
        for k in range(K):
            dk = basis.S_dual[:, k]
            modes[k] = basis.S.T @ ((w * dk)[:, None] * basis.S_dual)
        _RK_CACHE[key] = modes
    return _RK_CACHE[key]


def albedo_to_reduced_R(rho, basis: SensitivityBasis) -> ReducedRerad:
    """Reduced reflectance from an albedo color via spectral upsampling
    through the dual basis (linear in the albedo channels)."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (basis.K,):
        raise SpectralError(f"albedo has {rho.shape} channels, basis has K={basis.K}")
    modes = reflectance_modes(basis)
    return ReducedRerad(np.tensordot(rho, modes, axes=1), basis.labels)


def lift_albedo_U(rho_xyz, T_U: np.ndarray = T_U_DEFAULT) -> np.ndarray:
    rho_xyz = np.asarray(rho_xyz, dtype=float)
    if rho_xyz.shape != (3,):
        raise SpectralError("expected an XYZ albedo")
    return T_U @ rho_xyz


def drop_U(c_xyzu) -> np.ndarray:
    return T_XYZU_TO_XYZ @ np.asarray(c_xyzu, dtype=float)


def compute_T_U(basis_xyzu: SensitivityBasis, basis_xyz: SensitivityBasis) -> np.ndarray:
    """4x3 lift matrix S_xyzu^T W S_dual_xyz, computed on the grid."""
    if basis_xyzu.grid != basis_xyz.grid:
        raise SpectralError("bases must share a grid")
    w = basis_xyzu.weights
    return basis_xyzu.S.T @ (w[:, None] * basis_xyz.S_dual)


# --- Lab / CIEDE2000 --------------------------------------------------------


def xyz_to_lab(c_xyz, white_xyz) -> np.ndarray:
    c = np.asarray(c_xyz, dtype=float)
    wt = np.asarray(white_xyz, dtype=float)
    if wt[1] <= 0:
        raise SpectralError("white point must have positive Y")
    t = c / wt

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > (6 / 29) ** 3, np.cbrt(x), x / (3 * (6 / 29) ** 2) + 4 / 29)

    fx, fy, fz = f(t[0]), f(t[1]), f(t[2])
    return np.array([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)])


def delta_e2000(lab1, lab2) -> float:
    """CIEDE2000 color difference, kL = kC = kH = 1."""
    L1, a1, b1 = (float(v) for v in lab1)
    L2, a2, b2 = (float(v) for v in lab2)
    C1 = math.hypot(a1, b1)
    C2 = math.hypot(a2, b2)
    Cbar = 0.5 * (C1 + C2)
    G = 0.5 * (1.0 - math.sqrt(Cbar**7 / (Cbar**7 + 25.0**7)))
    a1p, a2p = (1.0 + G) * a1, (1.0 + G) * a2
    C1p = math.hypot(a1p, b1)
    C2p = math.hypot(a2p, b2)
    h1p = math.degrees(math.atan2(b1, a1p)) % 360.0 if (a1p or b1) else 0.0
    h2p = math.degrees(math.atan2(b2, a2p)) % 360.0 if (a2p or b2) else 0.0

    dLp = L2 - L1
    dCp = C2p - C1p
    if C1p * C2p == 0.0:
        dhp = 0.0
    else:
        d = h2p - h1p
        if d > 180.0:
            d -= 360.0
        elif d < -180.0:
            d += 360.0
        dhp = d
    dHp = 2.0 * math.sqrt(C1p * C2p) * math.sin(math.radians(dhp) / 2.0)

    Lbp = 0.5 * (L1 + L2)
    Cbp = 0.5 * (C1p + C2p)
    if C1p * C2p == 0.0:
        hbp = h1p + h2p
    else:
        s = h1p + h2p
        if abs(h1p - h2p) > 180.0:
            s += 360.0 if s < 360.0 else -360.0
        hbp = 0.5 * s
    T = (
        1.0
        - 0.17 * math.cos(math.radians(hbp - 30.0))
        + 0.24 * math.cos(math.radians(2.0 * hbp))
        + 0.32 * math.cos(math.radians(3.0 * hbp + 6.0))
        - 0.20 * math.cos(math.radians(4.0 * hbp - 63.0))
    )
    d_theta = 30.0 * math.exp(-(((hbp - 275.0) / 25.0) ** 2))
    RC = 2.0 * math.sqrt(Cbp**7 / (Cbp**7 + 25.0**7))
    SL = 1.0 + 0.015 * (Lbp - 50.0) ** 2 / math.sqrt(20.0 + (Lbp - 50.0) ** 2)
    SC = 1.0 + 0.045 * Cbp
    SH = 1.0 + 0.015 * Cbp * T
    RT = -math.sin(math.radians(2.0 * d_theta)) * RC
    return math.sqrt(
        (dLp / SL) ** 2
        + (dCp / SC) ** 2
        + (dHp / SH) ** 2
        + RT * (dCp / SC) * (dHp / SH)
    )


def delta_e2000_xyz(c1_xyz, c2_xyz, white_xyz) -> float:
    return delta_e2000(xyz_to_lab(c1_xyz, white_xyz), xyz_to_lab(c2_xyz, white_xyz))


# --- display ---------------------------------------------------------------

#: Canonical D65 white point of the sRGB display transform.
D65_WHITE_XYZ = np.array([0.95047, 1.0, 1.08883])

_XYZ_TO_SRGB = np.array(
    [
        [3.2406, -1.5372, -0.4986],
        [-0.9689, 1.8758, 0.0415],
        [0.0557, -0.2040, 1.0570],
    ]
)


def xyz_to_srgb_display(c_xyz, exposure: float = 1.0):
    """Gamma-encoded 8-bit sRGB with clipping.

    Accepts a single XYZ triple or an (..., 3) array; returns (rgb_u8,
    clipped_count).
    """
    c = np.asarray(c_xyz, dtype=float) * exposure
    lin = c @ _XYZ_TO_SRGB.T
    clipped = int(np.count_nonzero((lin < 0.0) | (lin > 1.0)))
    lin = np.clip(lin, 0.0, 1.0)
    srgb = np.where(lin <= 0.0031308, 12.92 * lin, 1.055 * lin ** (1 / 2.4) - 0.055)
    return (np.round(srgb * 255.0)).astype(np.uint8), clipped
