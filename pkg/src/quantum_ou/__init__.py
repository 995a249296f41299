"""Numerical verification toolkit for the quantum Ornstein-Uhlenbeck semigroup.

Submodules
----------
fock_space          truncated ladder operators, Gibbs state, Weyl operators
meixner             Meixner polynomials and certified weighted sums
weighted_sequences  the sequences f_{k,n,m}, weighted l_p norms, constant chain
schatten_lp         Schatten and Kosaki L_p(rho) norms
ou_semigroup        parameters, superoperators, generator, eigenbasis, T_t
hypercontractivity  contraction ratios, witness, optimal-time bisection
cli                 ``qou`` command-line entry point
"""

from .errors import (
    BracketError,
    DimensionMismatchError,
    DomainError,
    InfeasibleParametersError,
    InvalidDimensionError,
    PrecisionModeError,
    QOUError,
    SpanInsufficientError,
    TruncationTooSmallError,
)
from .fock_space import FockOperator, GibbsSpec, Label, build_ladder, build_rho, expect
from .ou_semigroup import CanonicalCFL, EigenBasis, General, HSVector, OUParams, solve_params

__all__ = [
    "BracketError",
    "CanonicalCFL",
    "DimensionMismatchError",
    "DomainError",
    "EigenBasis",
    "FockOperator",
    "General",
    "GibbsSpec",
    "HSVector",
    "InfeasibleParametersError",
    "InvalidDimensionError",
    "Label",
    "OUParams",
    "PrecisionModeError",
    "QOUError",
    "SpanInsufficientError",
    "TruncationTooSmallError",
    "build_ladder",
    "build_rho",
    "expect",
    "solve_params",
]

__version__ = "0.1.0"
