"""Exact and spectral tooling for square-and-add walks on finite fields.

The polynomial, algebra, chain, spectral, and mod-p layers are re-exported
here. Text serialization lives in :mod:`sqwalk.serialize`, figure rendering
in :mod:`sqwalk.figures`, and the command line driver in :mod:`sqwalk.cli`.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .gf2poly import (
    BinaryPolynomial,
    PolynomialParseError,
    cyclotomic,
    derivative,
    factor_degree_profile,
    is_irreducible,
    is_squarefree,
    is_two_primitive_root,
    order_of_two,
    poly_add,
    poly_gcd,
    poly_mulmod,
)
from .algebra import (
    AlgebraElement,
    BinaryMatrix,
    QuotientAlgebra,
    crt_summary,
    element_label,
    frobenius_orbits,
    make_algebra,
    matrix_power,
    normal_bases,
    square,
    squaring_matrix,
)
# chain.is_irreducible (chain connectivity) stays behind the module path
# to avoid shadowing the polynomial test of the same name.
from .chain import (
    Distribution,
    TransitionMatrix,
    WalkSpec,
    block_equivalence_check,
    build_add_only,
    build_modp,
    build_square_add,
    char_poly,
    evolve,
    frobenius_matched_map,
    intertwiner_check,
    is_aperiodic,
    power_ordering,
    simulate,
    stationary,
    tv_distance,
)
from .spectral import (
    CharacterIndex,
    MixingReport,
    envelope_bounds,
    fourier_block,
    fourier_product,
    hypercube_envelope,
    hypercube_l2,
    l2_bound_and_tv,
    lower_bound_term,
    rearrangement_check,
    sigma_sums,
    walsh_transform,
)
from .modp import (
    CensusRow,
    ClassSummary,
    StationaryReport,
    ZeroCensus,
    counting_stationary,
    ergodicity_report,
    predicted_zeros,
    stationary_integer,
    zero_census,
)

__all__ = [
    "__version__",
    "BinaryPolynomial",
    "PolynomialParseError",
    "cyclotomic",
    "derivative",
    "factor_degree_profile",
    "is_irreducible",
    "is_squarefree",
    "is_two_primitive_root",
    "order_of_two",
    "poly_add",
    "poly_gcd",
    "poly_mulmod",
    "AlgebraElement",
    "BinaryMatrix",
    "QuotientAlgebra",
    "crt_summary",
    "element_label",
    "frobenius_orbits",
    "make_algebra",
    "matrix_power",
    "normal_bases",
    "square",
    "squaring_matrix",
    "Distribution",
    "TransitionMatrix",
    "WalkSpec",
    "block_equivalence_check",
    "build_add_only",
    "build_modp",
    "build_square_add",
    "char_poly",
    "evolve",
    "frobenius_matched_map",
    "intertwiner_check",
    "is_aperiodic",
    "power_ordering",
    "simulate",
    "stationary",
    "tv_distance",
    "CharacterIndex",
    "MixingReport",
    "envelope_bounds",
    "fourier_block",
    "fourier_product",
    "hypercube_envelope",
    "hypercube_l2",
    "l2_bound_and_tv",
    "lower_bound_term",
    "rearrangement_check",
    "sigma_sums",
    "walsh_transform",
    "CensusRow",
    "ClassSummary",
    "StationaryReport",
    "ZeroCensus",
    "counting_stationary",
    "ergodicity_report",
    "predicted_zeros",
    "stationary_integer",
    "zero_census",
]
