"""
Differentials and the Cartier Operator

A Differential is f * d(var) in the canonical coordinate: var = "u" with a
LaurentSeries coefficient at a place, var = "t" with a RationalFunction
coefficient globally. Writing f = sum_j f_j^p var^j,

    C(f d var)      = f_{p-1} d var
    C^-1(f d var)   = f^p var^(p-1) d var
    res(f du)       = f_{-1}

ker C is exactly the image of d, and C fixes logarithmic forms df/f.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from cartier_lab.algebra.gf import FieldConfig, FieldElement, trace_to_prime
from cartier_lab.algebra.poly import Polynomial
from cartier_lab.algebra.ratfield import (
    LocalEmbedding,
    RationalFunction,
    ensure_precision,
    rf_expand_at,
    rf_valuation,
)
from cartier_lab.algebra.series import (
    LaurentSeries,
    ls_add,
    ls_derivative,
    ls_frobenius,
    ls_inv,
    ls_mul,
    ls_neg,
    ls_pbasis_decompose,
    ls_scale,
    ls_shift,
    ls_truncate,
)
from cartier_lab.errors import FieldMismatchError, NotExactError, PrecisionError, PreconditionError

Coefficient = Union[LaurentSeries, RationalFunction]


@dataclass(frozen=True)
class Differential:
    """
    The 1-form coeff * d(var).

    Attributes:
        coeff: LaurentSeries (local) or RationalFunction (global)
        var: Coordinate tag, "u" locally and "t" globally
    """

    coeff: Coefficient
    var: str = ""

    def __post_init__(self) -> None:
        if not self.var:
            object.__setattr__(self, "var", "u" if self.is_local else "t")

    @classmethod
    def zero_like(cls, other: "Differential") -> "Differential":
        if other.is_local:
            return cls(LaurentSeries.zero(other.field), other.var)
        return cls(RationalFunction.zero(other.field), other.var)

    @property
    def is_local(self) -> bool:
        return isinstance(self.coeff, LaurentSeries)

    @property
    def field(self) -> FieldConfig:
        return self.coeff.field

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def _check(self, other: "Differential") -> None:
        if not isinstance(other, Differential):
            raise TypeError(f"expected a Differential, got {type(other).__name__}")
        if other.var != self.var or other.is_local != self.is_local:
            raise FieldMismatchError(f"d{self.var} and d{other.var} forms do not mix")

    def __add__(self, other: "Differential") -> "Differential":
        self._check(other)
        if self.is_local:
            return Differential(ls_add(self.coeff, other.coeff), self.var)
        return Differential(self.coeff + other.coeff, self.var)

    def __neg__(self) -> "Differential":
        if self.is_local:
            return Differential(ls_neg(self.coeff), self.var)
        return Differential(-self.coeff, self.var)

    def __sub__(self, other: "Differential") -> "Differential":
        return self + (-other)

    def __mul__(self, factor) -> "Differential":
        """Multiply by a scalar or by a function of the same kind."""
        if self.is_local:
            if isinstance(factor, LaurentSeries):
                return Differential(ls_mul(self.coeff, factor), self.var)
            return Differential(ls_scale(self.coeff, self.field(factor)), self.var)
        return Differential(self.coeff * factor, self.var)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.is_zero() and (not self.is_local or self.coeff.is_exact):
            return "0"
        text = str(self.coeff)
        if " " in text or "+" in text or "/" in text:
            text = f"({text})"
        return f"{text} d{self.var}"

    def to_json_dict(self) -> dict:
        if self.is_local:
            return {"var": self.var, "coeff": self.coeff.to_json_dict()}
        return {"var": self.var, "coeff": str(self.coeff)}


@dataclass(frozen=True)
class DifferentialPair:
    """A pair of differentials in the same coordinate, the target of the wound-group map."""

    first: Differential
    second: Differential

    def __post_init__(self) -> None:
        self.first._check(self.second)

    @property
    def is_local(self) -> bool:
        return self.first.is_local

    def __add__(self, other: "DifferentialPair") -> "DifferentialPair":
        return DifferentialPair(self.first + other.first, self.second + other.second)

    def __neg__(self) -> "DifferentialPair":
        return DifferentialPair(-self.first, -self.second)

    def __sub__(self, other: "DifferentialPair") -> "DifferentialPair":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.first.is_zero() and self.second.is_zero()

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"

    def to_json_dict(self) -> list:
        return [self.first.to_json_dict(), self.second.to_json_dict()]


# ---------------------------------------------------------------------------
# d, C, C^-1
# ---------------------------------------------------------------------------


def d(f: Coefficient) -> Differential:
    """The exterior derivative df = f' d(var)."""
    if isinstance(f, LaurentSeries):
        return Differential(ls_derivative(f), "u")
    return Differential(f.derivative(), "t")


def _rational_pbasis(f: RationalFunction) -> tuple[list[Polynomial], Polynomial]:
    """(g_0..g_{p-1}, B) with f = sum_j (g_j / B)^p t^j, from A/B = A B^(p-1) / B^p."""
    p = f.field.p
    numerator = f.num * f.den ** (p - 1)
    return numerator.pbasis_split(), f.den


def cartier_C(omega: Differential) -> Differential:
    """
    The Cartier operator C(f d var) = f_{p-1} d var.

    A series coefficient known to O(u^prec) gives a result known to
    O(u^ceil((prec - p + 1) / p)), the precision of its p-basis component
    p - 1. A solution known to O(u^(pM)) therefore has C known to O(u^M).

    Raises:
        PrecisionError: series coefficient known to less than O(u^1)
    """
    p = omega.field.p
    if omega.is_local:
        if omega.coeff.prec < 1:
            raise PrecisionError("Cartier operator needs the coefficient known to at least O(u)")
        return Differential(ls_pbasis_decompose(omega.coeff)[p - 1], omega.var)
    parts, den = _rational_pbasis(omega.coeff)
    return Differential(RationalFunction(parts[p - 1], den), omega.var)


def cartier_inv(omega: Differential) -> Differential:
    """The representative f^p var^(p-1) d var of C^-1(f d var)."""
    p = omega.field.p
    if omega.is_local:
        return Differential(ls_shift(ls_frobenius(omega.coeff), p - 1), omega.var)
    t_power = RationalFunction(Polynomial.monomial(omega.field, p - 1))
    return Differential(omega.coeff.frobenius() * t_power, omega.var)


def residue(omega: Differential) -> FieldElement:
    """
    The u^-1 coefficient of a local differential.

    Raises:
        PreconditionError: global differential
        PrecisionError: the u^-1 coefficient is not known
    """
    if not omega.is_local:
        raise PreconditionError("residues are taken of local differentials; localize first")
    return omega.coeff.coefficient(-1)


def pairing(x: LaurentSeries, omega: Differential, place_degree: int = 1) -> Fraction:
    """
    The residue pairing <x, omega> = Tr(res(x omega)) / p in (1/p)Z/Z.

    Args:
        x: Local function
        omega: Local differential at the same place
        place_degree: Degree of the place; the residue field must contain F_{p^deg}

    Raises:
        PrecisionError: res(x omega) is not known
        PreconditionError: residue field inconsistent with place_degree
    """
    if omega.field.m % place_degree:
        raise PreconditionError(
            f"residue field of degree {omega.field.m} cannot belong to a place of degree {place_degree}"
        )
    value = residue(Differential(ls_mul(x, omega.coeff), omega.var))
    return Fraction(trace_to_prime(value), omega.field.p)


# ---------------------------------------------------------------------------
# Logarithmic and exact forms
# ---------------------------------------------------------------------------


def dlog(f: Coefficient, prec: Optional[int] = None) -> Differential:
    """
    df / f.

    Args:
        f: Nonzero function
        prec: Precision cap for the inverse of an exact non-monomial series
    """
    if isinstance(f, LaurentSeries):
        return Differential(ls_mul(ls_derivative(f), ls_inv(f, prec)), "u")
    return Differential(f.derivative() / f, "t")


def is_exact(omega: Differential) -> bool:
    """True if omega lies in the image of d (equivalently C(omega) = 0)."""
    return cartier_C(omega).coeff.is_zero()


def same_class_mod_exact(first: Differential, second: Differential) -> bool:
    """True if first - second is exact."""
    return is_exact(first - second)


def antiderivative(omega: Differential) -> Coefficient:
    """
    h with dh = omega, constant term 0.

    Series are integrated termwise (precision + 1); rational coefficients are
    integrated exactly through the p-basis split.

    Raises:
        NotExactError: omega is not exact
    """
    p = omega.field.p
    if omega.is_local:
        terms = {}
        for e, c in omega.coeff.terms():
            if (e + 1) % p == 0:
                raise NotExactError(f"nonzero coefficient at u^{e} is not a derivative")
            terms[e + 1] = c / (e + 1)
        prec = omega.coeff.prec if omega.coeff.is_exact else omega.coeff.prec + 1
        return LaurentSeries.from_dict(omega.field, terms, prec)

    parts, den = _rational_pbasis(omega.coeff)
    if not parts[p - 1].is_zero():
        raise NotExactError(f"{omega} is not exact: C(omega) is nonzero")
    total = Polynomial.zero(omega.field)
    for j, part in enumerate(parts[: p - 1]):
        total = total + part.frobenius() * Polynomial.monomial(omega.field, j + 1) * omega.field(j + 1).inverse()
    return RationalFunction(total, den.frobenius())


# ---------------------------------------------------------------------------
# Global to local
# ---------------------------------------------------------------------------


def localize(omega: Differential, e: LocalEmbedding, M: int) -> Differential:
    """
    The image f(T) T' du of a global f dt at the embedding, to O(u^M).

    Raises:
        PreconditionError: omega is already local
    """
    if omega.is_local:
        raise PreconditionError(f"{omega} is already local")
    f = omega.coeff
    field = e.residue_field
    if f.is_zero():
        return Differential(LaurentSeries.zero(field), "u")
    shift = 2 if e.place.is_infinity else 0
    if not e.is_exact:
        v = int(rf_valuation(f, e.place))
        e = ensure_precision(e, M + max(0, -v))
    expansion = rf_expand_at(f, e, M + shift)
    return Differential(ls_truncate(ls_mul(expansion, e.dtdu), M), "u")


def localize_pair(pair: DifferentialPair, e: LocalEmbedding, M: int) -> DifferentialPair:
    return DifferentialPair(localize(pair.first, e, M), localize(pair.second, e, M))


__all__ = [
    "Differential",
    "DifferentialPair",
    "d",
    "cartier_C",
    "cartier_inv",
    "residue",
    "pairing",
    "dlog",
    "is_exact",
    "same_class_mod_exact",
    "antiderivative",
    "localize",
    "localize_pair",
]
