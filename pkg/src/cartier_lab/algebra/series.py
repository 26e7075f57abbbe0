"""
Truncated Laurent Series over F_q

A LaurentSeries stores a dense coefficient window starting at `low` together
with the precision `prec`: every coefficient at an exponent below `prec` is
known, nothing at or beyond it is. Exact series (polynomials in u and u^-1,
and exact zero) carry prec = EXACT.

Precision rules:
    add:            min of the precisions
    mul:            min(prec_x + val_y, prec_y + val_x)
    inverse:        prec - 2 * val
    derivative:     prec - 1
    p-th root:      ceil(prec / p)
    p-basis part j: ceil((prec - j) / p)
    x -> x^p:       p * prec

Hensel lifting (Newton iteration with doubling precision, and the
Artin-Schreier series -sum c^(p^s)) lives here as well.
"""

import math
from typing import Optional, Sequence, Union

from cartier_lab.algebra.gf import FieldConfig, FieldElement
from cartier_lab.algebra.poly import Polynomial
from cartier_lab.config import get_logger
from cartier_lab.errors import (
    FieldMismatchError,
    HenselError,
    PrecisionError,
    PreconditionError,
    PthRootError,
)

logger = get_logger(__name__)

EXACT = math.inf

Precision = Union[int, float]


def _ceil_div(a: Precision, b: int) -> Precision:
    if a == EXACT:
        return EXACT
    return -((-int(a)) // b)


class LaurentSeries:
    """
    Immutable truncated Laurent series sum_e c_e u^e + O(u^prec).

    Attributes:
        field: Coefficient field F_q
        low: Exponent of the first stored coefficient (nonzero unless the
            series is zero, in which case low = prec, or 0 for exact zero)
        coeffs: Dense coefficients for exponents low, low + 1, ...
        prec: Exponent bound of known coefficients, or EXACT
    """

    __slots__ = ("field", "low", "coeffs", "prec")

    def __init__(
        self,
        field: FieldConfig,
        low: int,
        coeffs: Sequence[Union[int, FieldElement]],
        prec: Precision = EXACT,
    ):
        items = [field(c) for c in coeffs]
        if prec != EXACT:
            prec = int(prec)
            keep = max(0, prec - low)
            items = items[:keep]
        start = 0
        while start < len(items) and not items[start]:
            start += 1
        end = len(items)
        while end > start and not items[end - 1]:
            end -= 1
        items = items[start:end]
        if items:
            low = low + start
        else:
            low = prec if prec != EXACT else 0
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldConfig, prec: Precision = EXACT) -> "LaurentSeries":
        return cls(field, 0, (), prec)

    @classmethod
    def constant(cls, field: FieldConfig, value: Union[int, FieldElement], prec: Precision = EXACT) -> "LaurentSeries":
        return cls(field, 0, (value,), prec)

    @classmethod
    def monomial(
        cls,
        field: FieldConfig,
        exponent: int,
        coeff: Union[int, FieldElement] = 1,
        prec: Precision = EXACT,
    ) -> "LaurentSeries":
        return cls(field, exponent, (coeff,), prec)

    @classmethod
    def from_polynomial(cls, poly: Polynomial, prec: Precision = EXACT) -> "LaurentSeries":
        """Read a polynomial in the uniformizer as an (exact) series."""
        return cls(poly.field, 0, poly.coeffs, prec)

    @classmethod
    def from_dict(
        cls, field: FieldConfig, terms: dict[int, Union[int, FieldElement]], prec: Precision = EXACT
    ) -> "LaurentSeries":
        if not terms:
            return cls.zero(field, prec)
        low = min(terms)
        high = max(terms)
        coeffs = [terms.get(e, 0) for e in range(low, high + 1)]
        return cls(field, low, coeffs, prec)

    # -- accessors --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec == EXACT

    def is_zero(self) -> bool:
        """True if no nonzero coefficient is known (exact zero or O(u^prec))."""
        return not self.coeffs

    def valuation(self) -> Precision:
        """Exponent of the leading term; prec for O(u^prec); EXACT for exact zero."""
        if self.coeffs:
            return self.low
        return self.prec

    @property
    def high(self) -> int:
        """One past the last stored exponent."""
        return self.low + len(self.coeffs)

    def coefficient(self, exponent: int) -> FieldElement:
        """
        Coefficient of u^exponent.

        Raises:
            PrecisionError: exponent >= prec
        """
        if exponent >= self.prec:
            raise PrecisionError(f"coefficient u^{exponent} is beyond the precision O(u^{self.prec})")
        i = exponent - self.low
        if self.coeffs and 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def terms(self) -> list[tuple[int, FieldElement]]:
        """Stored nonzero terms as (exponent, coefficient)."""
        return [(self.low + i, c) for i, c in enumerate(self.coeffs) if c]

    def as_exact(self) -> "LaurentSeries":
        """The stored representative with the precision bound forgotten."""
        return LaurentSeries(self.field, self.low, self.coeffs, EXACT)

    # -- operators --------------------------------------------------------

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, FieldElement)):
            return LaurentSeries.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ls_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ls_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ls_sub(other, self)

    def __neg__(self) -> "LaurentSeries":
        return ls_neg(self)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return ls_scale(self, self.field(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ls_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentSeries":
        return ls_pow(self, exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.low == other.low
            and self.coeffs == other.coeffs
            and self.prec == other.prec
        )

    def __hash__(self) -> int:
        return hash((self.field, self.low, self.coeffs, self.prec))

    def agrees_with(self, other: "LaurentSeries", bound: int) -> bool:
        """True if both are known below `bound` and their coefficients there coincide."""
        if self.prec < bound or other.prec < bound:
            return False
        return ls_is_zero_to(ls_sub(ls_truncate(self, bound), ls_truncate(other, bound)), bound)

    # -- rendering --------------------------------------------------------

    def to_text(self, var: str = "u") -> str:
        parts = []
        for e, c in self.terms():
            scalar = str(c)
            if self.field.m > 1 and not c.is_prime:
                scalar = f"({scalar})"
            if e == 0:
                parts.append(scalar)
                continue
            mono = var if e == 1 else f"{var}^{e}"
            parts.append(mono if c == 1 else f"{scalar}*{mono}")
        if not self.is_exact:
            parts.append(f"O({var}^{self.prec})")
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentSeries({self.to_text()}, {self.field})"

    def to_json_dict(self) -> dict:
        return {
            "lowExp": self.low,
            "prec": None if self.is_exact else self.prec,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, field: FieldConfig, data: dict) -> "LaurentSeries":
        prec = EXACT if data.get("prec") is None else int(data["prec"])
        coeffs = [field.parse(c) for c in data.get("coeffs", [])]
        return cls(field, int(data["lowExp"]), coeffs, prec)


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------


def _check_fields(x: LaurentSeries, y: LaurentSeries) -> None:
    if x.field != y.field:
        raise FieldMismatchError(f"series over {x.field} and {y.field}")


def ls_add(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    """Sum; prec = min of precisions."""
    _check_fields(x, y)
    prec = min(x.prec, y.prec)
    stored = [s for s in (x, y) if s.coeffs]
    if not stored:
        return LaurentSeries.zero(x.field, prec)
    low = min(s.low for s in stored)
    high = max(s.high for s in stored)
    if prec != EXACT:
        high = min(high, int(prec))
    if high <= low:
        return LaurentSeries.zero(x.field, prec)
    out = [x.field.zero()] * (high - low)
    for s in stored:
        for i, c in enumerate(s.coeffs):
            e = s.low + i
            if e >= high:
                break
            out[e - low] = out[e - low] + c
    return LaurentSeries(x.field, low, out, prec)


def ls_neg(x: LaurentSeries) -> LaurentSeries:
    return LaurentSeries(x.field, x.low, [-c for c in x.coeffs], x.prec)


def ls_sub(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    return ls_add(x, ls_neg(y))


def ls_scale(x: LaurentSeries, a: FieldElement) -> LaurentSeries:
    """a * x for a scalar a."""
    if not a:
        return LaurentSeries.zero(x.field)
    return LaurentSeries(x.field, x.low, [a * c for c in x.coeffs], x.prec)


def ls_shift(x: LaurentSeries, k: int) -> LaurentSeries:
    """u^k * x (exact, so the precision moves with the exponents)."""
    prec = x.prec if x.is_exact else x.prec + k
    return LaurentSeries(x.field, x.low + k, x.coeffs, prec)


def ls_truncate(x: LaurentSeries, bound: Precision) -> LaurentSeries:
    """Forget everything at exponents >= bound."""
    if bound >= x.prec:
        return x
    return LaurentSeries(x.field, x.low, x.coeffs, bound)


def ls_valuation(x: LaurentSeries) -> Precision:
    return x.valuation()


def ls_is_zero_to(x: LaurentSeries, bound: int) -> bool:
    """True if x = O(u^bound): known below `bound` and all zero there."""
    if x.prec < bound:
        return False
    return not x.coeffs or x.low >= bound


def ls_mul(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    """
    Product with prec = min(prec_x + val_y, prec_y + val_x).

    Raises:
        FieldMismatchError: Operands over different fields
    """
    _check_fields(x, y)
    if (x.is_exact and not x.coeffs) or (y.is_exact and not y.coeffs):
        return LaurentSeries.zero(x.field)
    vx, vy = x.valuation(), y.valuation()
    prec = min(x.prec + vy, y.prec + vx)
    if not x.coeffs or not y.coeffs:
        return LaurentSeries.zero(x.field, prec)
    low = x.low + y.low
    length = len(x.coeffs) + len(y.coeffs) - 1
    if prec != EXACT:
        length = min(length, int(prec) - low)
    if length <= 0:
        return LaurentSeries.zero(x.field, prec)
    zero = x.field.zero()
    out = [zero] * length
    ycoeffs = y.coeffs
    for i, a in enumerate(x.coeffs):
        if i >= length:
            break
        if not a:
            continue
        for j in range(min(len(ycoeffs), length - i)):
            b = ycoeffs[j]
            if b:
                out[i + j] = out[i + j] + a * b
    return LaurentSeries(x.field, low, out, prec)


def ls_inv(x: LaurentSeries, prec: Optional[int] = None) -> LaurentSeries:
    """
    Multiplicative inverse with prec = prec_x - 2 * val(x).

    Args:
        x: Series with a known nonzero leading coefficient
        prec: Optional cap on the result precision; required when x is exact,
            since the inverse of a non-monomial is an infinite series

    Raises:
        PrecisionError: x is zero to its known precision, or x is exact and
            no cap was given
    """
    if not x.coeffs:
        raise PrecisionError("cannot invert a series with no known nonzero coefficient")
    v = x.low
    if x.is_exact:
        if len(x.coeffs) == 1:
            result = LaurentSeries.monomial(x.field, -v, x.coeffs[0].inverse())
            return result if prec is None else ls_truncate(result, prec)
        if prec is None:
            raise PrecisionError("inverse of an exact non-monomial series needs a precision cap")
        bound = prec
    else:
        bound = int(x.prec) - 2 * v
        if prec is not None:
            bound = min(bound, prec)
    n_terms = bound + v
    if n_terms <= 0:
        return LaurentSeries.zero(x.field, bound)
    c_inv = x.coeffs[0].inverse()
    a = [x.coefficient(v + k) if v + k < x.prec else x.field.zero() for k in range(n_terms)]
    b = [c_inv]
    for n in range(1, n_terms):
        acc = x.field.zero()
        for k in range(1, n + 1):
            if a[k]:
                acc = acc + a[k] * b[n - k]
        b.append(-(acc * c_inv))
    return LaurentSeries(x.field, -v, b, bound)


def ls_pow(x: LaurentSeries, n: int, prec: Optional[int] = None) -> LaurentSeries:
    """x^n by repeated squaring; negative n inverts first (see ls_inv for `prec`)."""
    if n < 0:
        return ls_pow(ls_inv(x, prec), -n)
    result = LaurentSeries.constant(x.field, 1)
    base = x
    while n:
        if n & 1:
            result = ls_mul(result, base)
        n >>= 1
        if n:
            base = ls_mul(base, base)
    return result


def ls_frobenius(x: LaurentSeries) -> LaurentSeries:
    """x^p computed termwise; prec = p * prec."""
    p = x.field.p
    terms = {p * e: c.frobenius() for e, c in x.terms()}
    prec = EXACT if x.is_exact else p * x.prec
    return LaurentSeries.from_dict(x.field, terms, prec)


def ls_derivative(x: LaurentSeries) -> LaurentSeries:
    """Formal d/du; the coefficient at j - 1 is j * x_j and prec drops by 1."""
    terms = {e - 1: c * e for e, c in x.terms()}
    prec = EXACT if x.is_exact else x.prec - 1
    return LaurentSeries.from_dict(x.field, terms, prec)


def ls_pth_root(x: LaurentSeries) -> LaurentSeries:
    """
    y with y^p = x; y_j = frobenius_inv(x_{pj}), prec = ceil(prec / p).

    Raises:
        PthRootError: a nonzero coefficient at an exponent not divisible by p
    """
    p = x.field.p
    terms = {}
    for e, c in x.terms():
        if e % p:
            raise PthRootError(f"nonzero coefficient at u^{e}, exponent not divisible by {p}")
        terms[e // p] = c.frobenius_inv()
    return LaurentSeries.from_dict(x.field, terms, _ceil_div(x.prec, p))


def ls_pbasis_decompose(x: LaurentSeries) -> list[LaurentSeries]:
    """
    (x_0, ..., x_{p-1}) with x = sum_j x_j^p u^j.

    Component j has precision ceil((prec - j) / p).
    """
    p = x.field.p
    parts: list[dict[int, FieldElement]] = [{} for _ in range(p)]
    for e, c in x.terms():
        j = e % p
        parts[j][(e - j) // p] = c.frobenius_inv()
    return [
        LaurentSeries.from_dict(
            x.field, parts[j], EXACT if x.is_exact else _ceil_div(x.prec - j, p)
        )
        for j in range(p)
    ]


def ls_pbasis_compose(parts: Sequence[LaurentSeries]) -> LaurentSeries:
    """Inverse of ls_pbasis_decompose: sum_j x_j^p u^j."""
    total = LaurentSeries.zero(parts[0].field)
    for j, part in enumerate(parts):
        total = ls_add(total, ls_shift(ls_frobenius(part), j))
    return total


def ls_eval_poly(
    coeffs: Sequence[LaurentSeries], x: LaurentSeries, prec: Optional[int] = None
) -> LaurentSeries:
    """
    Horner evaluation of sum_i coeffs[i] X^i at X = x.

    Args:
        coeffs: Series coefficients, low degree first
        x: Point of evaluation
        prec: Optional truncation applied after every step
    """
    field = x.field
    acc = LaurentSeries.zero(field)
    for c in reversed(coeffs):
        acc = ls_add(ls_mul(acc, x), c)
        if prec is not None:
            acc = ls_truncate(acc, prec)
    return acc


def ls_substitute_polynomial(
    poly: Polynomial, x: LaurentSeries, prec: Optional[int] = None
) -> LaurentSeries:
    """poly(x) with the polynomial's scalars coerced into the series field."""
    coeffs = [LaurentSeries.constant(x.field, x.field(c)) for c in poly.coeffs]
    return ls_eval_poly(coeffs, x, prec)


def ls_compose(f: LaurentSeries, s: LaurentSeries, prec: Optional[int] = None) -> LaurentSeries:
    """
    f(s) for a series s of positive valuation (a change of uniformizer).

    The truncation O(u^M) of f becomes O(w^(M * val s)).

    Args:
        f: Series in u
        s: Series in w with val(s) >= 1, giving u = s(w)
        prec: Target precision; required when f has a pole and s is exact

    Raises:
        PreconditionError: val(s) < 1
    """
    vs = s.valuation()
    if not s.coeffs or vs < 1:
        raise PreconditionError("substitution requires a series of positive valuation")
    field = s.field
    target = prec
    if not f.is_exact:
        bound = int(f.prec) * vs
        target = bound if target is None else min(target, bound)

    total = LaurentSeries.zero(field)
    terms = f.terms()
    positive = [(e, c) for e, c in terms if e >= 0]
    negative = [(e, c) for e, c in terms if e < 0]

    power = LaurentSeries.constant(field, 1)
    current = 0
    for e, c in positive:
        while current < e:
            power = ls_mul(power, s)
            if target is not None:
                power = ls_truncate(power, target)
            current += 1
        total = ls_add(total, ls_scale(power, c))

    if negative:
        k_max = -negative[0][0]
        if s.is_exact and target is None:
            raise PrecisionError("composition with a pole and an exact substitution needs a precision")
        cap = None if target is None else int(target) + (k_max - 1) * vs
        inverse = ls_inv(s, cap)
        power = LaurentSeries.constant(field, 1)
        current = 0
        for e, c in reversed(negative):
            while current < -e:
                power = ls_mul(power, inverse)
                current += 1
            total = ls_add(total, ls_scale(power, c))

    if target is not None:
        total = ls_truncate(total, target)
    return total


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def hensel_simple_root(
    F: Sequence[LaurentSeries], x0: LaurentSeries, M: int
) -> LaurentSeries:
    """
    Lift a simple residue root of F to a root modulo u^M by Newton iteration.

    Args:
        F: Coefficients of F(X) = sum_i F[i] X^i (integral series), low first
        x0: Integral approximation with F(x0) = 0 and F'(x0) a unit mod u
        M: Requested precision

    Returns:
        The unique root x = x0 (mod u), known to O(u^M)

    Raises:
        HenselError: F(x0) is not 0 mod u, F'(x0) is not a unit, or the
            inputs are not integral
        PrecisionError: some coefficient of F is known to less than M
    """
    if not F:
        raise HenselError("empty polynomial")
    field = F[0].field
    for c in F:
        if c.valuation() < 0:
            raise HenselError("polynomial coefficients must be integral")
        if c.prec < M:
            raise PrecisionError(f"coefficient known only to O(u^{c.prec}), need O(u^{M})")
    if x0.valuation() < 0:
        raise HenselError("starting point must be integral")

    dF = [ls_scale(c, field(i)) for i, c in enumerate(F)][1:]
    x = ls_truncate(x0, 1).as_exact()

    residual = ls_eval_poly(F, x, 1)
    if not ls_is_zero_to(residual, 1):
        raise HenselError("F(x0) is not zero modulo u: no residue root to lift")
    slope = ls_eval_poly(dF, x, 1)
    if slope.valuation() != 0:
        raise HenselError("F'(x0) is not a unit: the residue root is not simple")

    precision = 1
    while precision < M:
        precision = min(2 * precision, M)
        value = ls_eval_poly(F, x, precision)
        slope = ls_eval_poly(dF, x, precision)
        step = ls_mul(value, ls_inv(slope, precision))
        x = ls_truncate(ls_sub(x, step), precision).as_exact()
        logger.debug("Newton step reached O(u^%d)", precision)

    if not ls_is_zero_to(ls_eval_poly(F, x, M), M):
        raise HenselError("Newton iteration failed to produce a root")  # pragma: no cover
    return ls_truncate(x, M) if M != EXACT else x


def hensel_artin_schreier(c: LaurentSeries, M: int) -> LaurentSeries:
    """
    The unique X = 0 (mod u) with X^p - X = c, as -sum_{s>=0} c^(p^s) + O(u^M).

    Raises:
        PreconditionError: val(c) < 1
        PrecisionError: c known to less than O(u^M)
    """
    if c.valuation() < 1:
        raise PreconditionError("Artin-Schreier lifting needs val(c) >= 1")
    if c.prec < M:
        raise PrecisionError(f"right-hand side known only to O(u^{c.prec}), need O(u^{M})")
    total = LaurentSeries.zero(c.field, M)
    term = ls_truncate(c, M)
    while term.coeffs:
        total = ls_add(total, term)
        term = ls_truncate(ls_frobenius(term), M)
    return ls_neg(total)
