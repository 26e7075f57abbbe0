"""
Exception Hierarchy

All errors raised by cartier_lab derive from CartierLabError so the CLI can
separate computation failures (exit 1) from usage errors (exit 2).

Errors caused by bad input additionally subclass ValueError.
"""


class CartierLabError(Exception):
    """Base class for every library error."""


class FieldError(CartierLabError, ValueError):
    """Invalid finite-field configuration or element."""


class CharacteristicTwoError(FieldError):
    """p = 2 was requested; the constructions here need p >= 3."""


class ReducibleModulusError(FieldError):
    """The supplied modulus is not irreducible over F_p."""


class FieldMismatchError(FieldError):
    """Operands live over different fields."""


class ParseError(CartierLabError, ValueError):
    """A field element, polynomial, rational function or place failed to parse."""


class PrecisionError(CartierLabError):
    """The known precision of an input does not reach what was requested."""


class PthRootError(CartierLabError, ValueError):
    """A p-th root was requested of something that is not a p-th power."""


class HenselError(CartierLabError):
    """Hensel lifting hypotheses fail (no residue root, or non-unit derivative)."""


class PeriodError(CartierLabError, ValueError):
    """A prefix is too short for period detection, or inconsistent with (L, P)."""


class NotExactError(CartierLabError):
    """A differential outside the image of d was passed to antiderivative."""


class PreconditionError(CartierLabError, ValueError):
    """A documented precondition of an operation does not hold."""


class UnsupportedTargetError(CartierLabError):
    """The local construction used at this place does not cover the target."""


class ClaimViolation(CartierLabError):
    """A computed value contradicts a property the constructions rely on."""
