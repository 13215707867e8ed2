"""Bundled observer and illuminant data.

The operative sensitivity bases are Gaussian: the CIE 2006 2-degree
x-bar curve is represented by a pair of Gaussians, y-bar and z-bar by a
single Gaussian each, and an extra single-Gaussian UV band captures
reradiation from ultraviolet into the visible range.

A tabulated 1 nm color-matching-function asset is shipped alongside for
fitting and spectral-reference integration
(``cmf_2deg_1nm.csv``).  Authoritative 1 nm CIE 2006 tables cannot be
redistributed from this environment, so the asset is reconstructed from
the Gaussian approximations above; see the README for the consequences.

Illuminants: E, A and the D series come from the standard formulas and
published tables (D65 tabulated; D50/D75 reconstructed from the daylight
components).  FL2/FL7/FL11 are synthesized fluorescent-lamp stand-ins
(mercury lines over phosphor bands), and "UV" is a Gaussian SPD centered
at 370 nm with a 20 nm spread.
"""

from __future__ import annotations

import csv
import math
import os
from importlib import resources

import numpy as np

from ..spectral import (
    DEFAULT_GRID,
    Gaussian1D,
    SensitivityBasis,
    Spectrum,
    WavelengthGrid,
    build_basis,
)
from ._daylight import D65_SPD_5NM, DAYLIGHT_COMPONENTS_5NM

# Gaussian approximations of the CIE 2006 2-degree observer
# (amplitude, mean nm, std nm); x-bar needs two lobes.
XBAR_LOBE_1 = Gaussian1D(0.35087, 443.412226, 20.838149)
XBAR_LOBE_2 = Gaussian1D(1.141263, 596.813847, 33.276659)
YBAR = Gaussian1D(1.024335, 560.186336, 43.898132)
ZBAR = Gaussian1D(1.915863, 447.268188, 23.542626)
UV_BAND = Gaussian1D(1.0, 382.535501, 57.432550)

XYZ_ATOMS = (XBAR_LOBE_1, XBAR_LOBE_2, YBAR, ZBAR)
XYZU_ATOMS = XYZ_ATOMS + (UV_BAND,)

# Combines the two x-bar lobes into one channel.
TRANSFER_XYZ = np.array(
    [
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ]
)
TRANSFER_XYZU = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)

_BASIS_CACHE: dict[tuple, SensitivityBasis] = {}


def xyz_basis(grid: WavelengthGrid = DEFAULT_GRID) -> SensitivityBasis:
    key = ("xyz", grid)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = build_basis(
            list(XYZ_ATOMS), TRANSFER_XYZ, grid, labels=("X", "Y", "Z")
        )
    return _BASIS_CACHE[key]


def xyzu_basis(grid: WavelengthGrid = DEFAULT_GRID) -> SensitivityBasis:
    key = ("xyzu", grid)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = build_basis(
            list(XYZU_ATOMS), TRANSFER_XYZU, grid, labels=("X", "Y", "Z", "U")
        )
    return _BASIS_CACHE[key]


def get_basis(name: str, grid: WavelengthGrid = DEFAULT_GRID) -> SensitivityBasis:
    name = name.lower()
    if name == "xyz":
        return xyz_basis(grid)
    if name == "xyzu":
        return xyzu_basis(grid)
    raise KeyError(f"unknown basis {name!r}; expected 'xyz' or 'xyzu'")


def tabulated_cmfs(grid: WavelengthGrid = DEFAULT_GRID) -> dict[str, Spectrum]:
    """Shipped 1 nm x-bar/y-bar/z-bar tables, resampled onto ``grid``."""
    ref = resources.files(__package__) / "cmf_2deg_1nm.csv"
    lams, xs, ys, zs = [], [], [], []
    with ref.open("r", encoding="utf-8") as f:
        reader = csv.reader(f)
        next(reader)
        for row in reader:
            lams.append(float(row[0]))
            xs.append(float(row[1]))
            ys.append(float(row[2]))
            zs.append(float(row[3]))
    lams_arr = np.asarray(lams)
    out = {}
    for name, vals in (("x", xs), ("y", ys), ("z", zs)):
        v = np.interp(grid.wavelengths, lams_arr, np.asarray(vals), left=0.0, right=0.0)
        out[name] = Spectrum(grid, v)
    return out


# --- illuminants ------------------------------------------------------------


def _interp_table(table: dict[int, float], grid: WavelengthGrid) -> np.ndarray:
    lams = np.array(sorted(table))
    vals = np.array([table[int(l)] for l in lams])
    return np.interp(grid.wavelengths, lams, vals, left=0.0, right=0.0)


def _illuminant_a(grid: WavelengthGrid) -> np.ndarray:
    # Planckian radiator at 2848 K with the historical c2 = 1.435e-2 m K.
    lam = grid.wavelengths
    c2 = 1.435e7  # nm K
    num = math.exp(c2 / (2848.0 * 560.0)) - 1.0
    den = np.exp(c2 / (2848.0 * lam)) - 1.0
    return 100.0 * (560.0 / lam) ** 5 * num / den


def _daylight_spd(cct: float, grid: WavelengthGrid) -> np.ndarray:
    # Standard D-series reconstruction from the daylight components.
    t = cct * 1.4388 / 1.4380
    if t <= 7000.0:
        xd = 0.244063 + 0.09911e3 / t + 2.9678e6 / t**2 - 4.6070e9 / t**3
    else:
        xd = 0.237040 + 0.24748e3 / t + 1.9018e6 / t**2 - 2.7504e9 / t**3
    yd = -3.000 * xd**2 + 2.870 * xd - 0.275
    m = 0.0241 + 0.2562 * xd - 0.7341 * yd
    m1 = (-1.3515 - 1.7703 * xd + 5.9114 * yd) / m
    m2 = (0.0300 - 31.4424 * xd + 30.0717 * yd) / m
    lams = np.array(sorted(DAYLIGHT_COMPONENTS_5NM))
    comps = np.array([DAYLIGHT_COMPONENTS_5NM[int(l)] for l in lams])
    spd = comps[:, 0] + m1 * comps[:, 1] + m2 * comps[:, 2]
    return np.interp(grid.wavelengths, lams, spd, left=0.0, right=0.0)


def _lines_plus_bands(grid, bands, lines):
    lam = grid.wavelengths
    out = np.zeros_like(lam)
    for amp, mean, std in bands + lines:
        out += amp * np.exp(-((lam - mean) ** 2) / (2.0 * std**2))
    return out


_HG_LINES = [(30.0, 404.7, 1.2), (40.0, 435.8, 1.2), (35.0, 546.1, 1.2), (25.0, 577.8, 1.5)]


def _builtin_illuminant(name: str, grid: WavelengthGrid) -> np.ndarray:
    name = name.upper()
    if name == "E":
        return np.ones(grid.count)
    if name == "A":
        return _illuminant_a(grid)
    if name == "D65":
        return _interp_table(D65_SPD_5NM, grid)
    if name == "D50":
        return _daylight_spd(5000.0, grid)
    if name == "D75":
        return _daylight_spd(7500.0, grid)
    # Fluorescent-lamp stand-ins: phosphor bands plus mercury lines.
    if name == "FL2":
        return _lines_plus_bands(grid, [(60.0, 580.0, 80.0)], _HG_LINES)
    if name == "FL7":
        return _lines_plus_bands(
            grid, [(55.0, 450.0, 70.0), (55.0, 580.0, 90.0)], _HG_LINES
        )
    if name == "FL11":
        return _lines_plus_bands(
            grid,
            [(70.0, 450.0, 8.0), (90.0, 544.0, 6.0), (90.0, 611.0, 6.0)],
            _HG_LINES,
        )
    if name == "UV":
        return 100.0 * np.exp(-((grid.wavelengths - 370.0) ** 2) / (2.0 * 20.0**2))
    raise KeyError(f"unknown illuminant {name!r}")


BUILTIN_ILLUMINANTS = ("E", "A", "D50", "D65", "D75", "FL2", "FL7", "FL11", "UV")

#: Environment variable pointing at a directory of extra illuminant CSVs.
DATA_DIR_ENV = "FLUORO_DATA_DIR"


def illuminant_names() -> list[str]:
    names = list(BUILTIN_ILLUMINANTS)
    extra = os.environ.get(DATA_DIR_ENV)
    if extra and os.path.isdir(extra):
        for fn in sorted(os.listdir(extra)):
            if fn.lower().endswith(".csv"):
                names.append(os.path.splitext(fn)[0].upper())
    return names


def illuminant(name: str, grid: WavelengthGrid = DEFAULT_GRID) -> Spectrum:
    """Look up an illuminant SPD by name (built-in or from the data dir)."""
    try:
        return Spectrum(grid, _builtin_illuminant(name, grid))
    except KeyError:
        pass
    extra = os.environ.get(DATA_DIR_ENV)
    if extra and os.path.isdir(extra):
        for fn in os.listdir(extra):
            if os.path.splitext(fn)[0].upper() == name.upper() and fn.lower().endswith(
                ".csv"
            ):
                return Spectrum.from_csv(os.path.join(extra, fn), grid)
    raise KeyError(f"unknown illuminant {name!r}; available: {illuminant_names()}")
