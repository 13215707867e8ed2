"""Wavelength grids, tabulated spectra and Gaussian primitives.

All Gaussians here use the *unnormalized* amplitude convention

    g(lambda) = amplitude * exp(-(lambda - mean)^2 / (2 std^2)),

so ``amplitude`` is the peak value, not a probability-density weight.
Every discrete inner product in this package uses the trapezoidal rule
on a uniform wavelength grid.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np


class SpectralError(ValueError):
    """Invalid spectral data or incompatible grids."""


class SingularBasisError(SpectralError):
    """Sensitivity atoms are rank-deficient: the Gram matrix is singular."""


@dataclass(frozen=True)
class WavelengthGrid:
    """Uniform wavelength sampling in nanometres, endpoints included."""

    lambda_min: float
    lambda_max: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise SpectralError(f"grid step must be positive, got {self.step}")
        if self.lambda_min >= self.lambda_max:
            raise SpectralError(
                f"inverted grid range [{self.lambda_min}, {self.lambda_max}]"
            )

    @property
    def count(self) -> int:
        return int(round((self.lambda_max - self.lambda_min) / self.step)) + 1

    @property
    def wavelengths(self) -> np.ndarray:
        w = self.lambda_min + self.step * np.arange(self.count)
        return np.minimum(w, self.lambda_max)

    @property
    def trapezoid_weights(self) -> np.ndarray:
        """Quadrature weights such that f @ w approximates the integral."""
        w = np.full(self.count, self.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def index_of(self, lam: float) -> int:
        """Index of the sample closest to ``lam``."""
        return int(round((lam - self.lambda_min) / self.step))


def make_grid(lambda_min: float, lambda_max: float, step: float) -> WavelengthGrid:
    return WavelengthGrid(lambda_min, lambda_max, step)


#: Default grid for the whole toolkit: 300-800 nm at 1 nm (N = 501).
DEFAULT_GRID = make_grid(300.0, 800.0, 1.0)


@dataclass(frozen=True)
class Spectrum:
    """Tabulated function of wavelength on a :class:`WavelengthGrid`."""

    grid: WavelengthGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.count,):
            raise SpectralError(
                f"expected {self.grid.count} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise SpectralError("spectrum contains non-finite samples")
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(self.values @ self.grid.trapezoid_weights)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["wavelength_nm", "value"])
            for lam, v in zip(self.grid.wavelengths, self.values):
                writer.writerow([f"{lam:g}", repr(float(v))])

    @staticmethod
    def from_csv(path, grid: WavelengthGrid | None = None) -> "Spectrum":
        """Load a two-column ``wavelength_nm,value`` CSV.

        When ``grid`` is given, the tabulated values are linearly
        interpolated onto it (zero outside the tabulated range).
        """
        lams, vals = [], []
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or header[0].strip() != "wavelength_nm":
                raise SpectralError(f"{path}: missing 'wavelength_nm,value' header")
            for row in reader:
                if not row:
                    continue
                lams.append(float(row[0]))
                vals.append(float(row[1]))
        lams_arr = np.asarray(lams)
        vals_arr = np.asarray(vals)
        order = np.argsort(lams_arr)
        lams_arr, vals_arr = lams_arr[order], vals_arr[order]
        if grid is None:
            if len(lams_arr) < 2:
                raise SpectralError(f"{path}: need at least two samples")
            step = lams_arr[1] - lams_arr[0]
            grid = make_grid(float(lams_arr[0]), float(lams_arr[-1]), float(step))
            if grid.count != len(vals_arr):
                raise SpectralError(f"{path}: samples are not uniformly spaced")
            return Spectrum(grid, vals_arr)
        resampled = np.interp(grid.wavelengths, lams_arr, vals_arr, left=0.0, right=0.0)
        return Spectrum(grid, resampled)


@dataclass(frozen=True)
class Gaussian1D:
    """1D Gaussian, peak-amplitude convention (see module docstring)."""

    amplitude: float
    mean: float
    std: float

    def __post_init__(self):
        if self.std <= 0:
            raise SpectralError(f"Gaussian std must be positive, got {self.std}")

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        return self.amplitude * np.exp(-((lam - self.mean) ** 2) / (2.0 * self.std**2))

    def integral(self) -> float:
        """Integral over the whole real line."""
        return self.amplitude * self.std * math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Gaussian2D:
    """Axis-aligned 2D Gaussian over (absorption, emission) wavelengths."""

    amplitude: float
    mean_a: float
    std_a: float
    mean_e: float
    std_e: float

    def __post_init__(self):
        if self.std_a <= 0 or self.std_e <= 0:
            raise SpectralError("Gaussian2D stds must be positive")

    def __call__(self, lam_a, lam_e):
        lam_a = np.asarray(lam_a, dtype=float)
        lam_e = np.asarray(lam_e, dtype=float)
        ea = np.exp(-((lam_a - self.mean_a) ** 2) / (2.0 * self.std_a**2))
        ee = np.exp(-((lam_e - self.mean_e) ** 2) / (2.0 * self.std_e**2))
        return self.amplitude * ea * ee

    @property
    def marginal_a(self) -> Gaussian1D:
        return Gaussian1D(self.amplitude, self.mean_a, self.std_a)

    @property
    def marginal_e(self) -> Gaussian1D:
        return Gaussian1D(1.0, self.mean_e, self.std_e)


def eval_gaussian1d(g: Gaussian1D, lam: float) -> float:
    return float(g(lam))


def gaussian_product_1d(g1: Gaussian1D, g2: Gaussian1D) -> Gaussian1D:
    """Pointwise product of two Gaussians, again a Gaussian.

    The identity g1(x) g2(x) == product(x) holds for every x.
    """
    v1 = g1.std**2
    v2 = g2.std**2
    var = 1.0 / (1.0 / v1 + 1.0 / v2)
    mean = var * (g1.mean / v1 + g2.mean / v2)
    amp = g1.amplitude * g2.amplitude * math.exp(
        -((g1.mean - g2.mean) ** 2) / (2.0 * (v1 + v2))
    )
    return Gaussian1D(amp, mean, math.sqrt(var))


def discretize(g: Gaussian1D, grid: WavelengthGrid) -> Spectrum:
    return Spectrum(grid, g(grid.wavelengths))


@dataclass(frozen=True)
class SensitivityBasis:
    """Gaussian-atom sensitivity functions with their dual basis.

    ``S`` holds the K discretized sensitivity functions as columns
    (S = G @ transfer, G the discretized atoms), ``S_dual`` the dual
    functions S (S^T S)^-1 where inner products are trapezoidal on the
    grid, and ``C`` the inverse Gram matrix.  By construction
    S^T W S_dual = I_K with W the diagonal of quadrature weights.
    """

    grid: WavelengthGrid
    atoms: tuple[Gaussian1D, ...]
    transfer: np.ndarray  # M x K
    labels: tuple[str, ...]
    S: np.ndarray = field(repr=False)  # N x K
    S_dual: np.ndarray = field(repr=False)  # N x K
    C: np.ndarray = field(repr=False)  # K x K

    @property
    def K(self) -> int:
        return self.S.shape[1]

    @property
    def weights(self) -> np.ndarray:
        return self.grid.trapezoid_weights

    def dual_identity_residual(self) -> float:
        """max |S^T W S_dual - I|, should be ~0 for a healthy basis."""
        w = self.weights
        return float(
            np.max(np.abs(self.S.T @ (w[:, None] * self.S_dual) - np.eye(self.K)))
        )

    def content_hash(self) -> str:
        import hashlib

        h = hashlib.sha256()
        for g in self.atoms:
            h.update(f"{g.amplitude!r},{g.mean!r},{g.std!r};".encode())
        h.update(self.transfer.tobytes())
        h.update(f"{self.grid.lambda_min},{self.grid.lambda_max},{self.grid.step}".encode())
        return h.hexdigest()[:16]


def build_basis(
    atoms: list[Gaussian1D],
    transfer,
    grid: WavelengthGrid,
    labels: tuple[str, ...] | None = None,
) -> SensitivityBasis:
    """Build a sensitivity basis S = G @ transfer with its dual.

    Raises :class:`SingularBasisError` when the atoms combined through
    ``transfer`` do not span K independent directions.
    """
    transfer = np.asarray(transfer, dtype=float)
    M, K = transfer.shape
    if len(atoms) != M:
        raise SpectralError(f"transfer has {M} rows but {len(atoms)} atoms given")
    if M < K:
        raise SpectralError(f"need at least K={K} atoms, got M={M}")
    G = np.column_stack([discretize(g, grid).values for g in atoms])
    S = G @ transfer
    w = grid.trapezoid_weights
    gram = S.T @ (w[:, None] * S)
    if np.linalg.cond(gram) > 1e12:
        raise SingularBasisError("sensitivity basis is rank-deficient")
    C = np.linalg.inv(gram)
    S_dual = S @ C
    if labels is None:
        labels = tuple(f"ch{k}" for k in range(K))
    return SensitivityBasis(
        grid=grid,
        atoms=tuple(atoms),
        transfer=transfer,
        labels=tuple(labels),
        S=S,
        S_dual=S_dual,
        C=C,
    )


def basis_to_json(basis: SensitivityBasis) -> str:
    return json.dumps(
        {
            "atoms": [
                {"amplitude": g.amplitude, "mean_nm": g.mean, "std_nm": g.std}
                for g in basis.atoms
            ],
            "transfer": basis.transfer.tolist(),
            "grid": {
                "min": basis.grid.lambda_min,
                "max": basis.grid.lambda_max,
                "step": basis.grid.step,
            },
            "labels": list(basis.labels),
        },
        indent=2,
    )


def basis_from_json(text: str) -> SensitivityBasis:
    d = json.loads(text)
    atoms = [
        Gaussian1D(a["amplitude"], a["mean_nm"], a["std_nm"]) for a in d["atoms"]
    ]
    grid = make_grid(d["grid"]["min"], d["grid"]["max"], d["grid"]["step"])
    labels = tuple(d["labels"]) if "labels" in d else None
    return build_basis(atoms, d["transfer"], grid, labels)
