"""Fluorescent material toolkit: Gaussian reradiation models, reduced
color transport, fitting, palettes and preview rendering."""

__version__ = "0.1.0"

from .spectral import (  # noqa: F401
    DEFAULT_GRID,
    Gaussian1D,
    Gaussian2D,
    SensitivityBasis,
    Spectrum,
    WavelengthGrid,
    build_basis,
    discretize,
    eval_gaussian1d,
    gaussian_product_1d,
    make_grid,
)
from .reradiation import (  # noqa: F401
    DecomposedRerad,
    ReducedRerad,
    SpectralReradMatrix,
    apply_reduced,
    compose_reduced,
    decompose,
    outgoing_color_spectral,
    recompose,
    reduce_matrix,
)
from .analytic import (  # noqa: F401
    DiagonalModel,
    FluorescentMaterial,
    ModelGaussian,
    alpha_max_conservative,
    alpha_max_numeric,
    eval_fbar,
    reduce_diagonal_analytic,
    reduce_fluorescence,
    reduce_pair_closed_form,
    shear_parameters,
)
