"""
Finite Field Arithmetic

Exact arithmetic in F_q, q = p^m, on the power basis of a monic irreducible
modulus over F_p, together with the semilinear maps the Cartier computations
need: Frobenius, inverse Frobenius, the trace down to F_p, and solving the
Artin-Schreier equation x - x^(1/p) = c.

Usage:
    from cartier_lab.algebra.gf import get_field, artin_schreier_solve

    F9 = get_field(3, 2)          # F_3[g]/(g^2 + 1)
    g = F9.gen()
    assert g.frobenius() == -g
    roots = artin_schreier_solve(g)   # 3 solutions, since Tr(g) = 0
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence, Union

from sympy import isprime
from sympy.polys.domains import GF, ZZ
from sympy.polys.galoistools import (
    gf_from_int_poly,
    gf_gcd,
    gf_irreducible_p,
    gf_mul,
    gf_pow_mod,
    gf_rem,
)
from sympy.polys.matrices import DomainMatrix

from cartier_lab.config import get_logger
from cartier_lab.errors import (
    CharacteristicTwoError,
    FieldError,
    FieldMismatchError,
    ParseError,
    ReducibleModulusError,
)

logger = get_logger(__name__)

# Above this field size Artin-Schreier solving switches from enumeration to
# linear algebra over F_p.
ENUMERATION_LIMIT = 3**8


# ---------------------------------------------------------------------------
# Polynomials over F_p as coefficient lists, low degree first. galoistools
# works on dense lists high degree first; these wrappers convert at the edge.
# ---------------------------------------------------------------------------


def _to_dense(coeffs: Sequence[int], p: int) -> list:
    return gf_from_int_poly([int(c) for c in reversed(coeffs)], p)


def _from_dense(dense: Sequence, p: int) -> list[int]:
    return [int(c) % p for c in reversed(dense)]


def mulmod_p(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    """a * b mod modulus over F_p, low degree first."""
    product = gf_mul(_to_dense(a, p), _to_dense(b, p), p, ZZ)
    return _from_dense(gf_rem(product, _to_dense(modulus, p), p, ZZ), p)


def powmod_p(a: Sequence[int], n: int, modulus: Sequence[int], p: int) -> list[int]:
    """a^n mod modulus over F_p for n >= 0, low degree first."""
    return _from_dense(gf_pow_mod(_to_dense(a, p), n, _to_dense(modulus, p), p, ZZ), p)


def gcd_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Monic gcd over F_p, low degree first (empty for gcd(0, 0))."""
    return _from_dense(gf_gcd(_to_dense(a, p), _to_dense(b, p), p, ZZ), p)


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """
    Irreducibility over F_p.

    Args:
        f: Coefficients, low degree first
        p: The prime

    Returns:
        True if f has positive degree and no nontrivial factor over F_p
    """
    dense = _to_dense(f, p)
    if len(dense) < 2:
        return False
    return bool(gf_irreducible_p(dense, p, ZZ))


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """
    The lexicographically smallest monic irreducible polynomial of degree m.

    Candidates X^m + c_{m-1} X^{m-1} + ... + c_0 are ordered by the tuple
    (c_{m-1}, ..., c_0), so for p = 3 this yields X^2 + 1 and X^3 + 2X + 1.

    Returns:
        Coefficients low degree first, length m + 1
    """
    for index in range(p**m):
        digits = []
        n = index
        for _ in range(m):
            digits.append(n % p)
            n //= p
        # digits[0] is the least significant position, i.e. c_0
        candidate = tuple(digits) + (1,)
        if is_irreducible_mod_p(candidate, p):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Field configuration and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldConfig:
    """
    The finite field F_{p^m} presented as F_p[g]/(modulus).

    Attributes:
        p: Odd prime characteristic
        m: Extension degree
        modulus: Monic irreducible polynomial of degree m, low degree first.
            For m = 1 this is the identity configuration (0, 1).

    Raises:
        CharacteristicTwoError: p = 2
        FieldError: p not prime or m < 1
        ReducibleModulusError: modulus reducible or of wrong degree
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.p == 2:
            raise CharacteristicTwoError(
                "p = 2 is not supported: the constructions require p >= 3"
            )
        if not is_prime(self.p):
            raise FieldError(f"p = {self.p} is not prime")
        if self.m < 1:
            raise FieldError(f"extension degree must be positive, got {self.m}")

        if not self.modulus:
            modulus = (0, 1) if self.m == 1 else smallest_irreducible(self.p, self.m)
            object.__setattr__(self, "modulus", modulus)
        else:
            modulus = tuple(c % self.p for c in self.modulus)
            object.__setattr__(self, "modulus", modulus)
            if len(modulus) != self.m + 1 or modulus[-1] != 1:
                raise ReducibleModulusError(
                    f"modulus must be monic of degree {self.m}, got {modulus}"
                )
            if self.m > 1 and not is_irreducible_mod_p(modulus, self.p):
                raise ReducibleModulusError(f"modulus {modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        """Number of elements."""
        return self.p**self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __call__(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Coerce an integer (prime-field image) or coordinate vector into the field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                if value.field.p == self.p and value.is_prime:
                    return self(value.coords[0])
                raise FieldMismatchError(f"cannot coerce element of {value.field} into {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.m - 1))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) > self.m:
            raise FieldError(f"too many coordinates for F_{self.q}: {coords}")
        return FieldElement(self, coords + (0,) * (self.m - len(coords)))

    def zero(self) -> "FieldElement":
        return self._zero

    def one(self) -> "FieldElement":
        return self._one

    @cached_property
    def _zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    @cached_property
    def _one(self) -> "FieldElement":
        return self(1)

    def gen(self) -> "FieldElement":
        """The class g of X in F_p[X]/(modulus); for m = 1 the root of X, i.e. 0."""
        if self.m == 1:
            return self.zero()
        return self((0, 1))

    def from_index(self, index: int) -> "FieldElement":
        """Element whose base-p digits are its coordinates (inverse of FieldElement.index)."""
        coords = []
        for _ in range(self.m):
            coords.append(index % self.p)
            index //= self.p
        return FieldElement(self, tuple(coords))

    def elements(self) -> Iterator["FieldElement"]:
        """Enumerate F_q in the fixed total order used for canonical choices."""
        for index in range(self.q):
            yield self.from_index(index)

    def parse(self, text: str) -> "FieldElement":
        """
        Parse the `2*g+1` syntax (bare integers for the prime field).

        Raises:
            ParseError: Malformed input
        """
        source = text.replace(" ", "")
        if not source:
            raise ParseError("empty field element")
        coords = [0] * self.m
        for sign, term in _split_terms(source):
            coeff, power = _parse_monomial(term, "g")
            if power >= self.m:
                # reduce through the modulus rather than rejecting
                value = self.gen() ** power * coeff
                for i, c in enumerate(value.coords):
                    coords[i] += sign * c
                continue
            coords[power] += sign * coeff
        return self(coords)

    def __str__(self) -> str:
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.q}"


def _split_terms(source: str) -> list[tuple[int, str]]:
    terms: list[tuple[int, str]] = []
    sign = 1
    current = ""
    depth = 0
    for ch in source:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and current and not current.endswith("^"):
            terms.append((sign, current))
            sign = 1 if ch == "+" else -1
            current = ""
        elif ch in "+-" and depth == 0 and not current:
            sign = sign * (1 if ch == "+" else -1)
        else:
            current += ch
    if not current:
        raise ParseError(f"dangling operator in '{source}'")
    terms.append((sign, current))
    return terms


def _parse_monomial(term: str, symbol: str) -> tuple[int, int]:
    """Parse `c`, `c*s`, `s^k`, `c*s^k` into (coefficient, exponent)."""
    try:
        if symbol not in term:
            return int(term), 0
        coeff_part, _, var_part = term.rpartition(symbol)
        coeff_part = coeff_part.rstrip("*")
        coeff = int(coeff_part) if coeff_part else 1
        if not var_part:
            return coeff, 1
        if not var_part.startswith("^"):
            raise ValueError(var_part)
        return coeff, int(var_part[1:])
    except ValueError as exc:
        raise ParseError(f"cannot parse term '{term}'") from exc


@lru_cache(maxsize=None)
def get_field(p: int, m: int = 1, modulus: Optional[tuple[int, ...]] = None) -> FieldConfig:
    """Shared FieldConfig instance for (p, m, modulus)."""
    return FieldConfig(p, m, modulus or ())


class FieldElement:
    """
    Immutable element of F_q, stored as coordinates on the power basis.

    Supports +, -, *, /, ** (negative exponents invert) with other elements of
    the same field and with plain integers.
    """

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldConfig, coords: tuple[int, ...]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.m == 1:
            return FieldElement(f, ((self.coords[0] * other.coords[0]) % f.p,))
        product = mulmod_p(list(self.coords), list(other.coords), f.modulus, f.p)
        return FieldElement(f, tuple(product) + (0,) * (f.m - len(product)))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        f = self.field
        if f.m == 1:
            return FieldElement(f, (pow(self.coords[0], exponent, f.p),))
        power = powmod_p(list(self.coords), exponent, f.modulus, f.p)
        return FieldElement(f, tuple(power) + (0,) * (f.m - len(power)))

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.q - 2)

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

    # -- semilinear maps --------------------------------------------------

    def frobenius(self) -> "FieldElement":
        """x^p; a field automorphism of F_q."""
        if self.field.m == 1:
            return self
        return self ** self.field.p

    def frobenius_inv(self) -> "FieldElement":
        """The unique y with y^p = x, i.e. x^(p^(m-1))."""
        if self.field.m == 1:
            return self
        return self ** (self.field.p ** (self.field.m - 1))

    # -- comparison and conversion ---------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coords == other.coords and (
            self.field is other.field or self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    @property
    def is_prime(self) -> bool:
        """True if the element lies in the prime field F_p."""
        return not any(self.coords[1:])

    def to_prime(self) -> int:
        """The residue in [0, p) of a prime-field element."""
        if not self.is_prime:
            raise FieldError(f"{self} does not lie in F_{self.field.p}")
        return self.coords[0]

    def index(self) -> int:
        """Position in the fixed total order of FieldConfig.elements()."""
        value = 0
        for c in reversed(self.coords):
            value = value * self.field.p + c
        return value

    def __lt__(self, other: "FieldElement") -> bool:
        return self.index() < other.index()

    def __str__(self) -> str:
        if self.field.m == 1:
            return str(self.coords[0])
        parts = []
        for power in range(self.field.m - 1, -1, -1):
            c = self.coords[power]
            if not c:
                continue
            if power == 0:
                parts.append(str(c))
            else:
                mono = "g" if power == 1 else f"g^{power}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.field})"


# ---------------------------------------------------------------------------
# Trace and Artin-Schreier solving
# ---------------------------------------------------------------------------


def frobenius(x: FieldElement) -> FieldElement:
    """x^p."""
    return x.frobenius()


def frobenius_inv(x: FieldElement) -> FieldElement:
    """x^(1/p)."""
    return x.frobenius_inv()


def trace_to_prime(x: FieldElement) -> int:
    """
    Absolute trace x + x^p + ... + x^(p^(m-1)) as a residue in [0, p).
    """
    total = x
    y = x
    for _ in range(x.field.m - 1):
        y = y.frobenius()
        total = total + y
    return total.to_prime()


def _as_map(x: FieldElement) -> FieldElement:
    return x - x.frobenius_inv()


def artin_schreier_image(field: FieldConfig) -> frozenset[FieldElement]:
    """Image of x -> x - x^(1/p) on F_q (exhaustive)."""
    return frozenset(_as_map(x) for x in field.elements())


def solve_mod_p(
    matrix: list[list[int]], rhs: list[int], p: int
) -> tuple[Optional[list[int]], list[list[int]]]:
    """
    Solve matrix . x = rhs over F_p.

    Returns:
        (particular solution or None, basis of the kernel)
    """
    K = GF(p)
    cols = len(matrix[0]) if matrix else 0
    aug = DomainMatrix(
        [[K(a % p) for a in row] + [K(b % p)] for row, b in zip(matrix, rhs)],
        (len(matrix), cols + 1),
        K,
    )
    reduced, pivots = aug.rref()
    rows = [[int(K.to_sympy(v)) % p for v in row] for row in reduced.to_list()]

    if cols in pivots:
        particular = None
    else:
        particular = [0] * cols
        for i, c in enumerate(pivots):
            particular[c] = rows[i][cols]

    kernel = []
    for free in (c for c in range(cols) if c not in pivots):
        vec = [0] * cols
        vec[free] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-rows[i][free]) % p
        kernel.append(vec)
    return particular, kernel


def artin_schreier_solve(c: FieldElement, method: str = "auto") -> list[FieldElement]:
    """
    All x in F_q with x - x^(1/p) = c.

    The solution set is empty or a coset of F_p (exactly p elements); it is
    nonempty iff trace_to_prime(c) == 0.

    Args:
        c: Right-hand side
        method: "enumerate" (exhaustive), "linear" (F_p-linear algebra on the
            coordinates of x -> x - x^(1/p)) or "auto" (enumerate for q up to
            ENUMERATION_LIMIT)

    Returns:
        Solutions in ascending field order
    """
    F = c.field
    if method == "auto":
        method = "enumerate" if F.q <= ENUMERATION_LIMIT else "linear"

    if method == "enumerate":
        return [x for x in F.elements() if _as_map(x) == c]
    if method != "linear":
        raise ValueError(f"unknown Artin-Schreier method '{method}'")

    basis = [F.from_index(F.p**i) for i in range(F.m)]
    images = [_as_map(e).coords for e in basis]
    # column i of the matrix is the image of the i-th basis vector
    matrix = [[images[col][row] for col in range(F.m)] for row in range(F.m)]
    particular, kernel = solve_mod_p(matrix, list(c.coords), F.p)
    if particular is None:
        return []
    if len(kernel) != 1:
        raise FieldError(f"kernel of x - x^(1/p) has dimension {len(kernel)}, expected 1")
    x0 = F(particular)
    k = F(kernel[0])
    return sorted(x0 + k * s for s in range(F.p))
