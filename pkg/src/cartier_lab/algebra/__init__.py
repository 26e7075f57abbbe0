"""
Exact Algebra

Finite fields, polynomials, truncated Laurent series, the rational function
field F_p(t) with its places and completions, and differentials with the
Cartier operator.
"""

from .gf import (
    FieldConfig,
    FieldElement,
    artin_schreier_image,
    artin_schreier_solve,
    frobenius,
    frobenius_inv,
    get_field,
    trace_to_prime,
)
from .poly import Polynomial, gcd, monic_irreducibles
from .series import (
    EXACT,
    LaurentSeries,
    hensel_artin_schreier,
    hensel_simple_root,
    ls_derivative,
    ls_inv,
    ls_mul,
    ls_pbasis_decompose,
    ls_pth_root,
)
from .ratfield import (
    LocalEmbedding,
    Place,
    RationalFunction,
    detect_eventual_period,
    embed_t,
    parse_place,
    parse_rational,
    places_up_to_degree,
    rational_from_periodic,
    rf_expand_at,
    rf_is_pth_power,
    rf_valuation,
)
from .cartier import (
    Differential,
    DifferentialPair,
    antiderivative,
    cartier_C,
    cartier_inv,
    d,
    dlog,
    is_exact,
    localize,
    localize_pair,
    pairing,
    residue,
)

__all__ = [
    # Finite fields
    "FieldConfig",
    "FieldElement",
    "get_field",
    "frobenius",
    "frobenius_inv",
    "trace_to_prime",
    "artin_schreier_solve",
    "artin_schreier_image",
    # Polynomials
    "Polynomial",
    "gcd",
    "monic_irreducibles",
    # Series
    "EXACT",
    "LaurentSeries",
    "ls_mul",
    "ls_inv",
    "ls_derivative",
    "ls_pth_root",
    "ls_pbasis_decompose",
    "hensel_simple_root",
    "hensel_artin_schreier",
    # Global field
    "RationalFunction",
    "Place",
    "LocalEmbedding",
    "parse_place",
    "parse_rational",
    "places_up_to_degree",
    "rf_valuation",
    "rf_expand_at",
    "rf_is_pth_power",
    "embed_t",
    "detect_eventual_period",
    "rational_from_periodic",
    # Differentials
    "Differential",
    "DifferentialPair",
    "d",
    "cartier_C",
    "cartier_inv",
    "residue",
    "pairing",
    "dlog",
    "is_exact",
    "antiderivative",
    "localize",
    "localize_pair",
]
