"""
Dense Univariate Polynomials over F_q

Support module for ratfield: exact polynomial arithmetic in one variable over
a FieldConfig, gcd and irreducibility testing (sympy galoistools over F_p,
Euclid and Ben-Or over F_{p^m}), p-th roots and the
p-basis split f = sum_j h_j^p t^j used by the rational Cartier operator.
"""

from itertools import product
from typing import Iterator, Sequence, Union

from cartier_lab.algebra.gf import (
    FieldConfig,
    FieldElement,
    _parse_monomial,
    _split_terms,
    gcd_mod_p,
    is_irreducible_mod_p,
)
from cartier_lab.errors import FieldMismatchError, ParseError, PthRootError

Scalar = Union[int, FieldElement]


class Polynomial:
    """
    Immutable polynomial with FieldElement coefficients, low degree first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: FieldConfig, coeffs: Sequence[Scalar] = (), var: str = "t"):
        items = [field(c) for c in coeffs]
        while items and not items[-1]:
            items.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldConfig, var: str = "t") -> "Polynomial":
        return cls(field, (), var)

    @classmethod
    def one(cls, field: FieldConfig, var: str = "t") -> "Polynomial":
        return cls(field, (1,), var)

    @classmethod
    def monomial(cls, field: FieldConfig, degree: int, coeff: Scalar = 1, var: str = "t") -> "Polynomial":
        return cls(field, [0] * degree + [coeff], var)

    @classmethod
    def parse(cls, field: FieldConfig, text: str, var: str = "t") -> "Polynomial":
        """
        Parse `t^3+2*t+1`; coefficients are integers or parenthesised field
        elements such as `(2*g+1)*t^2`.
        """
        source = text.replace(" ", "")
        if not source:
            raise ParseError("empty polynomial")
        coeffs: dict[int, FieldElement] = {}
        for sign, term in _split_terms(source):
            if term.startswith("("):
                close = term.find(")")
                if close < 0:
                    raise ParseError(f"unbalanced parenthesis in '{term}'")
                scalar = field.parse(term[1:close])
                rest = term[close + 1 :].lstrip("*")
                if rest:
                    _, power = _parse_monomial(rest, var)
                else:
                    power = 0
            else:
                if any(ch.isalpha() and ch != var for ch in term):
                    raise ParseError(f"unexpected symbol in '{term}'")
                c, power = _parse_monomial(term, var)
                scalar = field(c)
            coeffs[power] = coeffs.get(power, field.zero()) + (scalar if sign > 0 else -scalar)
        degree = max(coeffs) if coeffs else 0
        return cls(field, [coeffs.get(i, 0) for i in range(degree + 1)], var)

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading == 1

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        inv = self.leading.inverse()
        return self._new([c * inv for c in self.coeffs])

    def valuation(self) -> int:
        """Order of vanishing at t = 0 (infinite for zero is reported as -1)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def _new(self, coeffs: Sequence[Scalar]) -> "Polynomial":
        return Polynomial(self.field, coeffs, self.var)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, FieldElement)):
            return self._new([other])
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return self._new([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return self._new([self.coeff(i) - other.coeff(i) for i in range(n)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return self._new(())
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = self._new([1])
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return self._new(()), self
        quot = [self.field.zero()] * dq
        inv_lead = other.leading.inverse()
        d = other.degree
        for k in range(dq - 1, -1, -1):
            factor = rem[k + d] * inv_lead
            if not factor:
                continue
            quot[k] = factor
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - factor * c
        return self._new(quot), self._new(rem[:d])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def divides(self, other: "Polynomial") -> bool:
        return (other % self).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self._new([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    # -- calculus and Frobenius structure --------------------------------

    def derivative(self) -> "Polynomial":
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        """Horner evaluation at any value supporting + and * with field scalars."""
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def frobenius(self) -> "Polynomial":
        """f^p, computed coefficient-wise as sum c^p t^(pi)."""
        p = self.field.p
        out = [self.field.zero()] * (p * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[p * i] = c.frobenius()
        return self._new(out)

    def pth_root(self) -> "Polynomial":
        """
        h with h^p = f.

        Raises:
            PthRootError: some nonzero coefficient sits at an exponent not divisible by p
        """
        p = self.field.p
        out = []
        for i, c in enumerate(self.coeffs):
            if i % p:
                if c:
                    raise PthRootError(f"exponent {i} is not divisible by {p}")
                continue
            out.append(c.frobenius_inv())
        return self._new(out)

    def is_pth_power(self) -> bool:
        p = self.field.p
        return all(not c for i, c in enumerate(self.coeffs) if i % p)

    def pbasis_split(self) -> list["Polynomial"]:
        """(h_0, ..., h_{p-1}) with f = sum_j h_j^p t^j."""
        p = self.field.p
        parts: list[list[FieldElement]] = [[] for _ in range(p)]
        for i, c in enumerate(self.coeffs):
            parts[i % p].append(c.frobenius_inv())
        # parts[j][k] is the k-th coefficient of h_j: exponent p*k + j
        return [self._new(part) for part in parts]

    # -- rendering --------------------------------------------------------

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Degree first, then coefficients from the top down in field order."""
        return (self.degree, tuple(c.index() for c in reversed(self.coeffs)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if not c:
                continue
            scalar = str(c)
            if self.field.m > 1 and not c.is_prime:
                scalar = f"({scalar})"
            if power == 0:
                parts.append(scalar)
                continue
            mono = self.var if power == 1 else f"{self.var}^{power}"
            parts.append(mono if c == 1 else f"{scalar}*{mono}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self}, {self.field})"


def _prime_coeffs(f: Polynomial) -> list[int]:
    return [c.to_prime() for c in f.coeffs]


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero if both are zero)."""
    if a.field.is_prime_field:
        return a._new(gcd_mod_p(_prime_coeffs(a), _prime_coeffs(b), a.field.p))
    # galoistools only covers prime fields; Euclid over F_{p^m}
    while b:
        a, b = b, a % b
    return a.monic()


def is_irreducible(f: Polynomial) -> bool:
    """Irreducibility over the coefficient field F_q."""
    if f.degree < 1:
        return False
    if f.field.is_prime_field:
        return is_irreducible_mod_p(_prime_coeffs(f), f.field.p)
    if f.degree == 1:
        return True
    # Ben-Or over F_{p^m}: no factor of degree k divides t^(q^k) - t
    q = f.field.q
    x = Polynomial.monomial(f.field, 1, var=f.var)
    h = x
    for _ in range(f.degree // 2):
        h = _powmod(h, q, f)
        if gcd(f, h - x).degree > 0:
            return False
    return True


def _powmod(base: Polynomial, exponent: int, modulus: Polynomial) -> Polynomial:
    result = Polynomial.one(base.field, base.var)
    base = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


def monic_polynomials(field: FieldConfig, degree: int, var: str = "t") -> Iterator[Polynomial]:
    """All monic polynomials of exactly this degree, in sort_key order."""
    elements = list(field.elements())
    for lower in product(elements, repeat=degree):
        # product varies the last position fastest; reverse so that the
        # constant term is the fastest-varying coefficient
        yield Polynomial(field, list(reversed(lower)) + [1], var)


def polynomials_up_to(field: FieldConfig, max_degree: int, var: str = "t") -> Iterator[Polynomial]:
    """Zero, then every nonzero polynomial of degree <= max_degree, in sort_key order."""
    yield Polynomial.zero(field, var)
    elements = list(field.elements())
    for degree in range(max_degree + 1):
        for lead in elements[1:]:
            for lower in product(elements, repeat=degree):
                yield Polynomial(field, list(reversed(lower)) + [lead], var)


def monic_irreducibles(field: FieldConfig, degree: int, var: str = "t") -> list[Polynomial]:
    """Monic irreducible polynomials of the given degree in sort_key order."""
    return [f for f in monic_polynomials(field, degree, var) if is_irreducible(f)]
