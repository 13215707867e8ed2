"""Spectral reradiation matrices and reduced-space color transport.

Storage layout: ``entries[o, i]`` with rows indexed by the outgoing
wavelength and columns by the incoming one, both ascending.  Energy only
moves toward longer wavelengths, so entries with lambda_o < lambda_i are
zero.  The diagonal holds the ordinary reflectance (a delta line in the
continuous picture), off-diagonal entries are reradiation *densities*;
consequently the diagonal integrates with a single trapezoidal measure
and the fluorescent part with two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import SensitivityBasis, SpectralError, Spectrum, WavelengthGrid, make_grid

#: Reflectances this close to 1 are clamped before the 1/(1-rho) division.
RHO_CLAMP_EPS = 1e-4


class GridMismatchError(SpectralError):
    """Operands are tabulated on different wavelength grids."""


def _check_grids(a: WavelengthGrid, b: WavelengthGrid):
    if a != b:
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


@dataclass(frozen=True)
class SpectralReradMatrix:
    """Bispectral reradiation on a wavelength grid (see module docstring)."""

    grid: WavelengthGrid
    entries: np.ndarray  # N x N, [o, i]

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        n = self.grid.count
        if e.shape != (n, n):
            raise SpectralError(f"expected {n}x{n} matrix, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise SpectralError("reradiation matrix contains non-finite entries")
        object.__setattr__(self, "entries", e)

    @property
    def diagonal(self) -> Spectrum:
        return Spectrum(self.grid, np.diag(self.entries).copy())

    @property
    def off_diagonal(self) -> np.ndarray:
        out = self.entries.copy()
        np.fill_diagonal(out, 0.0)
        return out

    def row_energy(self) -> np.ndarray:
        """Total reradiated energy per incoming wavelength.

        Diagonal reflectance counts directly, the fluorescent density is
        integrated over outgoing wavelengths.
        """
        w = self.grid.trapezoid_weights
        fluo = w @ self.off_diagonal  # integrate over lambda_o, per column
        return np.diag(self.entries) + fluo

    @staticmethod
    def from_triangular(grid, entries, enforce: bool = True):
        """Build from raw data, zeroing noise below the energy diagonal.

        Returns (matrix, zeroed_count).
        """
        e = np.asarray(entries, dtype=float).copy()
        below = np.triu(np.ones_like(e, dtype=bool), k=1)  # o < i
        count = int(np.count_nonzero(e[below])) if enforce else 0
        if enforce:
            e[below] = 0.0
        return SpectralReradMatrix(grid, e), count


@dataclass(frozen=True)
class DecomposedRerad:
    """Reflectance diagonal plus normalized fluorescence density."""

    rho: Spectrum
    fbar: np.ndarray  # N x N, [o, i], zero for o <= i
    clamped: bool = False  # reflectance hit the 1 - eps clamp

    @property
    def grid(self) -> WavelengthGrid:
        return self.rho.grid


@dataclass(frozen=True)
class ReducedRerad:
    """K x K matrix acting on incoming colors: c_out = entries @ c_in."""

    entries: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise SpectralError(f"reduced matrix must be square, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise SpectralError("reduced matrix contains non-finite entries")
        object.__setattr__(self, "entries", e)
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"ch{k}" for k in range(e.shape[0]))
            )

    @property
    def K(self) -> int:
        return self.entries.shape[0]


def decompose(P: SpectralReradMatrix) -> DecomposedRerad:
    """Split into reflectance and normalized fluorescence.

    fbar(o, i) = P(o, i) / (1 - rho(i)) for o > i; recomposing gives the
    input back exactly (up to the clamp for rho within eps of 1).
    """
    rho = np.diag(P.entries).copy()
    if np.any(rho > 1.0) or np.any(rho < 0.0):
        raise SpectralError("diagonal reflectance outside [0, 1]")
    clamped = bool(np.any(rho > 1.0 - RHO_CLAMP_EPS))
    rho_c = np.minimum(rho, 1.0 - RHO_CLAMP_EPS)
    fbar = P.off_diagonal / (1.0 - rho_c)[None, :]
    fbar = np.tril(fbar, k=-1)  # strictly o > i
    return DecomposedRerad(Spectrum(P.grid, rho_c), fbar, clamped)


def recompose(d: DecomposedRerad) -> SpectralReradMatrix:
    """Inverse of :func:`decompose`: P = R + fbar (1 - R)."""
    rho = d.rho.values
    entries = np.tril(d.fbar, k=-1) * (1.0 - rho)[None, :]
    entries[np.diag_indices_from(entries)] = rho
    return SpectralReradMatrix(d.grid, entries)


def reduce_matrix(M, basis: SensitivityBasis) -> ReducedRerad:
    """Project a bispectral matrix onto the sensitivity basis.

    Accepts either a :class:`SpectralReradMatrix` (diagonal treated as a
    delta line, single measure) or a plain N x N density array (double
    measure everywhere).
    """
    w = basis.weights
    if isinstance(M, SpectralReradMatrix):
        _check_grids(M.grid, basis.grid)
        dens = M.off_diagonal
        rho = np.diag(M.entries)
        diag_part = basis.S.T @ ((w * rho)[:, None] * basis.S_dual)
    else:
        dens = np.asarray(M, dtype=float)
        if dens.shape != (basis.grid.count, basis.grid.count):
            raise GridMismatchError(
                f"matrix shape {dens.shape} does not match basis grid"
            )
        diag_part = 0.0
    fluo_part = (w[:, None] * basis.S).T @ dens @ (w[:, None] * basis.S_dual)
    return ReducedRerad(diag_part + fluo_part, basis.labels)


def apply_reduced(P: ReducedRerad, c_in) -> np.ndarray:
    c_in = np.asarray(c_in, dtype=float)
    if c_in.shape != (P.K,):
        raise SpectralError(f"color has shape {c_in.shape}, expected ({P.K},)")
    return P.entries @ c_in


def compose_reduced(R: ReducedRerad, Fbar: ReducedRerad) -> ReducedRerad:
    """Full reduced transport R + Fbar (I - R)."""
    if R.K != Fbar.K:
        raise SpectralError(f"channel mismatch: {R.K} vs {Fbar.K}")
    eye = np.eye(R.K)
    return ReducedRerad(R.entries + Fbar.entries @ (eye - R.entries), R.labels)


def split_outgoing(R: ReducedRerad, Fbar: ReducedRerad, c_in) -> tuple[np.ndarray, np.ndarray]:
    """Reflected and fluorescent parts of the outgoing color."""
    c_in = np.asarray(c_in, dtype=float)
    c_refl = R.entries @ c_in
    c_fluo = Fbar.entries @ (c_in - c_refl)
    return c_refl, c_fluo


def outgoing_color_spectral(P: SpectralReradMatrix, L: Spectrum, sensors) -> np.ndarray:
    """Reference double-quadrature outgoing color.

    ``sensors`` is either a SensitivityBasis or a list of tabulated
    Spectrum curves (e.g. the shipped CMFs).
    """
    _check_grids(P.grid, L.grid)
    if isinstance(sensors, SensitivityBasis):
        _check_grids(P.grid, sensors.grid)
        S = sensors.S
    else:
        cols = []
        for s in sensors:
            _check_grids(P.grid, s.grid)
            cols.append(s.values)
        S = np.column_stack(cols)
    w = P.grid.trapezoid_weights
    rho = np.diag(P.entries)
    out_spectrum = P.off_diagonal @ (w * L.values)  # indexed by lambda_o
    fluo = S.T @ (w * out_spectrum)
    refl = S.T @ (w * rho * L.values)
    return refl + fluo


# --- file format ------------------------------------------------------------


def save_bispec(P: SpectralReradMatrix, path) -> None:
    """Text format: header ``BISPEC v1 N lambda_min lambda_max`` then N
    rows (lambda_o ascending) of N space-separated reals (lambda_i
    ascending)."""
    g = P.grid
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"BISPEC v1 {g.count} {g.lambda_min:g} {g.lambda_max:g}\n")
        for row in P.entries:
            f.write(" ".join(repr(float(v)) for v in row))
            f.write("\n")


def load_bispec(path) -> tuple[SpectralReradMatrix, int]:
    """Load the BISPEC text format, or the CSV variant with explicit
    wavelength columns (header ``lambda_o_nm,<lambda_i values...>``).

    Returns (matrix, number_of_below-diagonal_entries_zeroed).
    """
    with open(path, encoding="utf-8") as f:
        first = f.readline().split()
        if first[:2] == ["BISPEC", "v1"]:
            n = int(first[2])
            lo, hi = float(first[3]), float(first[4])
            grid = make_grid(lo, hi, (hi - lo) / (n - 1))
            rows = [np.fromstring(f.readline(), sep=" ") for _ in range(n)]
            entries = np.vstack(rows)
        else:
            f.seek(0)
            header = f.readline().strip().split(",")
            lam_i = np.array([float(v) for v in header[1:]])
            lam_o, rows = [], []
            for line in f:
                parts = line.strip().split(",")
                if not parts[0]:
                    continue
                lam_o.append(float(parts[0]))
                rows.append([float(v) for v in parts[1:]])
            lam_o = np.array(lam_o)
            if len(lam_i) != len(lam_o) or not np.allclose(lam_i, lam_o):
                raise SpectralError(f"{path}: CSV wavelength axes differ")
            step = lam_i[1] - lam_i[0]
            grid = make_grid(float(lam_i[0]), float(lam_i[-1]), float(step))
            entries = np.asarray(rows)
    return SpectralReradMatrix.from_triangular(grid, entries)
