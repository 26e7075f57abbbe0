"""
The Global Field F_p(t)

Rational functions in t, the places of the projective line, and the local
embeddings k -> k_v of the global field into its completions F_q((u)).

At a finite place pi the residue class of t generates the residue field, so
the residue field is presented as F_p[g]/(pi(g)) and the expansion T of t
satisfies T = g (mod u) and pi(T) = u. At infinity T = 1/u.

Also here: the eventual-periodicity test that characterizes the elements of
F_p(t) inside F_p[[t]], and its inverse reconstruction.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from cartier_lab.algebra.gf import FieldConfig, FieldElement, get_field
from cartier_lab.algebra.poly import Polynomial, gcd, is_irreducible, monic_irreducibles
from cartier_lab.algebra.series import (
    EXACT,
    LaurentSeries,
    hensel_simple_root,
    ls_inv,
    ls_mul,
    ls_substitute_polynomial,
    ls_truncate,
)
from cartier_lab.config import get_logger
from cartier_lab.errors import FieldMismatchError, ParseError, PeriodError, PreconditionError

logger = get_logger(__name__)


class RationalFunction:
    """
    Reduced fraction numerator/denominator with a monic denominator.

    Zero is stored as 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Optional[Polynomial] = None):
        if den is None:
            den = Polynomial.one(num.field, num.var)
        if num.field != den.field:
            raise FieldMismatchError(f"{num.field} vs {den.field}")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial.one(num.field, num.var)
        else:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                inv = lead.inverse()
                num, den = num * inv, den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldConfig) -> "RationalFunction":
        return cls(Polynomial.zero(field))

    @classmethod
    def constant(cls, field: FieldConfig, value: Union[int, FieldElement]) -> "RationalFunction":
        return cls(Polynomial(field, [value]))

    @classmethod
    def t(cls, field: FieldConfig) -> "RationalFunction":
        """The coordinate function t."""
        return cls(Polynomial.monomial(field, 1))

    @classmethod
    def parse(cls, field: FieldConfig, text: str) -> "RationalFunction":
        return parse_rational(field, text)

    # -- properties -------------------------------------------------------

    @property
    def field(self) -> FieldConfig:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def height(self) -> int:
        """max(deg num, deg den), the bound used by the exhaustive searches."""
        return max(self.num.degree, self.den.degree, 0)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFunction(self.num**exponent, self.den**exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def derivative(self) -> "RationalFunction":
        """d/dt by the quotient rule."""
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def frobenius(self) -> "RationalFunction":
        """f^p, computed coefficient-wise."""
        return RationalFunction(self.num.frobenius(), self.den.frobenius())

    def sort_key(self) -> tuple:
        return (self.height(), self.den.sort_key(), self.num.sort_key())

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"{_wrap(self.num)}/{_wrap(self.den)}"

    def __repr__(self) -> str:
        return f"RationalFunction({self}, {self.field})"


def _wrap(poly: Polynomial) -> str:
    text = str(poly)
    if "+" in text or "(" in text:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_polynomial(field: FieldConfig, text: str) -> Polynomial:
    """Parse `t^3+2*t+1` (an enclosing pair of parentheses is allowed)."""
    source = text.strip()
    if source.startswith("(") and source.endswith(")") and _balanced(source[1:-1]):
        source = source[1:-1]
    return Polynomial.parse(field, source)


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def parse_rational(field: FieldConfig, text: str) -> RationalFunction:
    """
    Parse `num/den` where each side is a polynomial, optionally parenthesised.

    Raises:
        ParseError: Malformed input or a zero denominator
    """
    source = text.replace(" ", "")
    depth = 0
    split = None
    for i, ch in enumerate(source):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split is not None:
                raise ParseError(f"more than one fraction bar in '{text}'")
            split = i
    if split is None:
        return RationalFunction(parse_polynomial(field, source))
    num = parse_polynomial(field, source[:split])
    den = parse_polynomial(field, source[split + 1 :])
    if den.is_zero():
        raise ParseError(f"zero denominator in '{text}'")
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# Places
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """
    A place of F_p(t): a monic irreducible pi(t), or the degree valuation at infinity.

    Attributes:
        field: Coefficient field of the global field
        poly: The place polynomial (None at infinity)
    """

    field: FieldConfig
    poly: Optional[Polynomial] = None

    def __post_init__(self) -> None:
        if self.poly is None:
            return
        if self.poly.field != self.field:
            raise FieldMismatchError(f"place polynomial over {self.poly.field}, expected {self.field}")
        if not self.poly.is_monic():
            raise PreconditionError(f"place polynomial {self.poly} is not monic")
        if not is_irreducible(self.poly):
            raise PreconditionError(f"place polynomial {self.poly} is not irreducible")

    @classmethod
    def finite(cls, poly: Polynomial) -> "Place":
        return cls(poly.field, poly)

    @classmethod
    def infinity(cls, field: FieldConfig) -> "Place":
        return cls(field, None)

    @classmethod
    def parse(cls, field: FieldConfig, text: str) -> "Place":
        return parse_place(field, text)

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self) -> tuple:
        """Degree, then finite before infinity, then the polynomial order."""
        if self.poly is None:
            return (1, 1, ())
        return (self.degree, 0, self.poly.sort_key())

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "1/t" if self.poly is None else str(self.poly)


def parse_place(field: FieldConfig, text: str) -> Place:
    """
    Parse `t`, `t+1`, `t^2+1` or `1/t`.

    Raises:
        ParseError: Not a polynomial, or not monic irreducible
    """
    source = text.replace(" ", "")
    if source in ("1/t", "inf", "infinity"):
        return Place.infinity(field)
    poly = parse_polynomial(field, source)
    try:
        return Place.finite(poly)
    except PreconditionError as e:
        raise ParseError(f"'{text}' is not a place: {e}") from e


def places_up_to_degree(field: FieldConfig, degree: int) -> list[Place]:
    """All finite places of degree <= `degree` plus infinity, in place order."""
    places = [Place.infinity(field)]
    for d in range(1, degree + 1):
        places.extend(Place.finite(f) for f in monic_irreducibles(field, d))
    return sorted(places, key=Place.sort_key)


def _multiplicity(poly: Polynomial, pi: Polynomial) -> int:
    count = 0
    while not poly.is_zero():
        quotient, remainder = divmod(poly, pi)
        if not remainder.is_zero():
            break
        poly = quotient
        count += 1
    return count


def rf_valuation(f: RationalFunction, place: Place) -> Union[int, float]:
    """Exact valuation of f at the place (math.inf for f = 0)."""
    if f.is_zero():
        return math.inf
    if place.is_infinity:
        return f.den.degree - f.num.degree
    return _multiplicity(f.num, place.poly) - _multiplicity(f.den, place.poly)


def rf_is_pth_power(f: RationalFunction) -> Optional[RationalFunction]:
    """h with h^p = f when f lies in K^p, else None."""
    if not (f.num.is_pth_power() and f.den.is_pth_power()):
        return None
    return RationalFunction(f.num.pth_root(), f.den.pth_root())


# ---------------------------------------------------------------------------
# Local embeddings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalEmbedding:
    """
    The embedding of F_p(t) into the completion at a place.

    Attributes:
        place: The place
        residue_field: F_p[g]/(pi) at a finite place, the base field at infinity
        t_image: Expansion T of t in the uniformizer u
        dtdu: The derivative dT/du
        precision: Known precision of t_image (EXACT when T is a polynomial in u, 1/u)
    """

    place: Place
    residue_field: FieldConfig
    t_image: LaurentSeries
    dtdu: LaurentSeries
    precision: Union[int, float] = EXACT

    @property
    def is_exact(self) -> bool:
        return self.precision == EXACT


def embed_t(place: Place, M: int) -> LocalEmbedding:
    """
    Expand t at the place.

    Degree-one places t - theta and infinity give exact expansions theta + u
    and 1/u. At a place of degree d > 1 the expansion is the Hensel lift of
    the root g of pi to pi(T) = u, known to O(u^M).

    Raises:
        PreconditionError: A place of degree > 1 over a non-prime base field
    """
    field = place.field
    if place.is_infinity:
        return LocalEmbedding(
            place=place,
            residue_field=field,
            t_image=LaurentSeries.monomial(field, -1),
            dtdu=LaurentSeries.monomial(field, -2, -1),
        )

    pi = place.poly
    if pi.degree == 1:
        theta = -pi.coeffs[0]
        return LocalEmbedding(
            place=place,
            residue_field=field,
            t_image=LaurentSeries(field, 0, (theta, 1)),
            dtdu=LaurentSeries.constant(field, 1),
        )

    if not field.is_prime_field:
        raise PreconditionError("places of degree > 1 are supported over the prime field only")
    residue = get_field(field.p, pi.degree, tuple(c.to_prime() for c in pi.coeffs))

    F = [LaurentSeries.constant(residue, residue(c)) for c in pi.coeffs]
    F[0] = F[0] - LaurentSeries.monomial(residue, 1)
    T = hensel_simple_root(F, LaurentSeries.constant(residue, residue.gen()), M)

    slope = ls_substitute_polynomial(pi.derivative(), T, M)
    if slope.valuation() != 0:
        # every irreducible over a finite field is separable
        raise PreconditionError(f"pi'(g) vanishes for {pi}")  # pragma: no cover
    logger.debug("Embedded t at %s to O(u^%d)", place, M)
    return LocalEmbedding(
        place=place,
        residue_field=residue,
        t_image=T,
        dtdu=ls_inv(slope, M),
        precision=M,
    )


def ensure_precision(e: LocalEmbedding, M: int) -> LocalEmbedding:
    """e itself if it is exact or already known to O(u^M), else a re-embedding."""
    if e.is_exact or e.precision >= M:
        return e
    logger.debug("Re-embedding t at %s: O(u^%s) -> O(u^%d)", e.place, e.precision, M)
    return embed_t(e.place, M)


def rf_expand_at(f: RationalFunction, e: LocalEmbedding, M: int) -> LaurentSeries:
    """
    The u-adic expansion of f to O(u^M).

    Polynomials at exact embeddings come back exact.
    """
    field = e.residue_field
    if f.is_zero():
        return LaurentSeries.zero(field)
    if not e.is_exact:
        pole = int(rf_valuation(RationalFunction(f.den), e.place))
        e = ensure_precision(e, M + 2 * pole)

    num = ls_substitute_polynomial(f.num, e.t_image)
    if f.is_polynomial():
        return num if e.is_exact else ls_truncate(num, M)
    den = ls_substitute_polynomial(f.den, e.t_image)
    cap = M - int(num.valuation())
    result = ls_mul(num, ls_inv(den, cap))
    return ls_truncate(result, M)


# ---------------------------------------------------------------------------
# Eventual periodicity
# ---------------------------------------------------------------------------


def _consistent(coeffs: Sequence, L: int, P: int) -> bool:
    return all(coeffs[i] == coeffs[i + P] for i in range(L, len(coeffs) - P))


def detect_eventual_period(coeffs: Sequence, Pmax: int, Lmax: int) -> Optional[tuple[int, int]]:
    """
    The least (L, P), preperiod first, with L <= Lmax and P <= Pmax that the
    prefix is consistent with.

    Raises:
        PeriodError: Prefix shorter than Lmax + 2 * Pmax
    """
    if len(coeffs) < Lmax + 2 * Pmax:
        raise PeriodError(
            f"prefix of length {len(coeffs)} is too short for Lmax={Lmax}, Pmax={Pmax}"
        )
    for L in range(Lmax + 1):
        for P in range(1, Pmax + 1):
            if _consistent(coeffs, L, P):
                return L, P
    return None


def rational_from_periodic(
    prefix: Sequence, L: int, P: int, e: LocalEmbedding
) -> RationalFunction:
    """
    The rational function whose [t]-expansion has the given eventually
    periodic coefficients: head(t) + t^L * period(t) / (1 - t^P).

    Raises:
        PreconditionError: e is not the embedding at [t]
        PeriodError: (L, P) inconsistent with the prefix, or prefix shorter than L + P
    """
    place = e.place
    if place.is_infinity or place.poly.degree != 1 or place.poly.coeffs[0]:
        raise PreconditionError("reconstruction is defined at the place [t]")
    if len(prefix) < L + P:
        raise PeriodError(f"prefix of length {len(prefix)} does not cover L + P = {L + P}")
    if not _consistent(prefix, L, P):
        raise PeriodError(f"prefix is not eventually periodic with (L, P) = ({L}, {P})")

    field = place.field
    head = Polynomial(field, [field(c) for c in prefix[:L]])
    period = Polynomial(field, [field(c) for c in prefix[L : L + P]])
    tail = RationalFunction(
        Polynomial.monomial(field, L) * period,
        Polynomial.one(field) - Polynomial.monomial(field, P),
    )
    return RationalFunction(head) + tail


__all__ = [
    "RationalFunction",
    "Place",
    "LocalEmbedding",
    "parse_polynomial",
    "parse_rational",
    "parse_place",
    "places_up_to_degree",
    "monic_irreducibles",
    "rf_valuation",
    "rf_is_pth_power",
    "embed_t",
    "ensure_precision",
    "rf_expand_at",
    "detect_eventual_period",
    "rational_from_periodic",
]
