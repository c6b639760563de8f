"""Bound state of a one-site perturbation of the squared discrete Laplacian."""

from .errors import AccuracyError, DomainError, ResolutionError
from .field import AlgebraicNumber, af_add, af_from_rational, af_inverse, af_mul, af_to_float
from .series import BivariateSeries, ImplicitProblem, TruncatedSeries, ts_binomial, ts_compose, ts_implicit_solve, ts_mul
from .spectral import (
    ModelParameters,
    Region,
    SpectralPoint,
    ddz_determinant,
    determinant,
    dispersion,
    residue_data,
    resolvent_closed,
    resolvent_quadrature,
)
from .eigen import (
    EigenResult,
    bracket_eigenvalue,
    eigen_derivatives,
    eigenfunction_momentum,
    eigenfunction_position,
    eigenvalue,
    solve_eigenvalue,
)
from .asymptotics import AsymptoticExpansion, Regime, expand, expand_negative, expand_positive
from .lattice import SpectrumReport, build_truncated, dense_spectrum_small, secular_eigenvalue, truncated_green

__version__ = "0.1.0"
