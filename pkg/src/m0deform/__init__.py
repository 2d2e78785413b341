"""Exact-arithmetic cohomology and deformation computations for m0.

The package computes, at a configurable truncation degree and entirely over
the rationals: homogeneous cochain cohomology of the filiform Lie algebra
m0, its explicit H^1 generators and bracket, the k-families of 2-cocycles,
Massey squares/cubes with 3-coboundary compensation, the homogeneous
quadratic obstruction systems in diagonal variables, and the true
deformations to m2, L1 and the suppressed-Witt algebras L1{m}.
"""

from .algebra import (
    BasisRescale,
    GradedAlgebra,
    Rational,
    identity_rescale,
    inverse_factorial_rescale,
    jacobi_defect,
    make_L1,
    make_m0,
    make_m2,
    rat,
    rescale,
)
from .cochains import (
    CohomologyReport,
    HomCochain,
    NamedGenerator,
    coboundary_basis,
    cohomology_dim,
    differential,
    differential_at,
    h1_generators,
    is_cocycle,
    nr_bracket_deg1,
    reduce_mod_coboundary,
)
from .errors import (
    ContradictoryFamilyError,
    DepthExceededError,
    InvalidCompensatorError,
    InvalidRescaleError,
    InvalidTruncationError,
    M0DeformError,
    NotACocycleError,
    ObstructedError,
    UnsupportedDegreeError,
    WindowError,
)
from .families import (
    DiagonalParams,
    FamilySpec,
    closed_form_coeff,
    complete_cocycle,
    from_diagonal,
    k_family,
    validity_check,
)
from .massey import (
    CubeInput,
    all_cubes_zero,
    all_squares_zero,
    compensable,
    massey_cube,
    massey_square,
    noncompensable_squares_zero,
    relation_defect,
    square_cochain,
    try_compensate,
)

__version__ = "0.1.0"
