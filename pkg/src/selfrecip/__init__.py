"""Eigenfunctions of the half-line cosine and sine transforms.

Modules
-------
special      complex Gamma, kappa constants, phase factors
grid         log-uniform grids, sampled functions, CSV/JSON
oscquad      regularized oscillatory power integrals, product quadrature
cstransform  cosine and sine transforms, Hermite functions
mellin       critical-line Mellin transform and its multiplier relation
eigenchain   generalized eigenfunctions, eigenchains, synthesis operators
verify       named residual suites behind ``selfrecip verify``
"""

__version__ = "0.1.0"

from .cstransform import (TransformConfig, cosine_transform, eigen_residual, hermite,
                          parseval_residual, sine_transform, transform)
from .eigenchain import (ChainCoordinate, ChainDensity, GeneralizedEigenfunction, broad_sense_residual,
                         decompose, evaluate_E, evaluate_e, projector_apply, t_adjoint, t_apply)
from .grid import (CriticalLineFunction, GridFunction, RadialGrid, default_grid, make_radial_grid,
                   parse_grid_spec)
from .mellin import mellin_forward, mellin_inverse, titchmarsh_multiplier, verify_multiplier_relation
from .special import StripPoint, gamma, kappa, log_gamma, phase

__all__ = [
    "TransformConfig", "cosine_transform", "sine_transform", "transform", "hermite",
    "eigen_residual", "parseval_residual",
    "ChainCoordinate", "ChainDensity", "GeneralizedEigenfunction", "evaluate_E", "evaluate_e",
    "t_apply", "t_adjoint", "projector_apply", "broad_sense_residual", "decompose",
    "RadialGrid", "GridFunction", "CriticalLineFunction", "make_radial_grid", "parse_grid_spec",
    "default_grid",
    "mellin_forward", "mellin_inverse", "titchmarsh_multiplier", "verify_multiplier_relation",
    "StripPoint", "gamma", "log_gamma", "kappa", "phase",
]
