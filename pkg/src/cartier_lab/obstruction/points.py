"""
Points on the wound group t x^p = y^p - y.

Locally, any x with v(t x^p) > 0 lifts: y is the Hensel root of
Y^p - Y = t x^p congruent to 0 mod u. Globally the group has finitely many
points; the bounded search enumerates y and reads x off as a p-th root.
"""

from fractions import Fraction

from cartier_lab.algebra.cartier import DifferentialPair, pairing
from cartier_lab.algebra.gf import FieldConfig
from cartier_lab.algebra.poly import gcd, monic_polynomials, polynomials_up_to
from cartier_lab.algebra.ratfield import (
    Place,
    RationalFunction,
    embed_t,
    rf_expand_at,
    rf_is_pth_power,
)
from cartier_lab.algebra.series import (
    LaurentSeries,
    hensel_artin_schreier,
    ls_frobenius,
    ls_is_zero_to,
    ls_mul,
    ls_sub,
)
from cartier_lab.config import get_logger
from cartier_lab.errors import ClaimViolation, PrecisionError, PreconditionError
from cartier_lab.obstruction.models import WoundPoint

logger = get_logger(__name__)


def wound_local_point(xv: LaurentSeries, place: Place, M: int) -> WoundPoint:
    """
    Lift a local x to a point (x, y) with y = 0 mod u, verified to O(u^M).

    Raises:
        PreconditionError: v(t x^p) <= 0 at the place
        PrecisionError: x is not known well enough for t x^p to reach O(u^M)
    """
    e = embed_t(place, M + 2)
    if xv.field != e.residue_field:
        xv = LaurentSeries(e.residue_field, xv.low, xv.coeffs, xv.prec)
    c = ls_mul(e.t_image, ls_frobenius(xv))
    if c.coeffs and c.valuation() <= 0:
        raise PreconditionError(
            f"t x^p has valuation {c.valuation()} at {place}; a point exists only when it is positive"
        )
    if c.prec < M:
        raise PrecisionError(f"t x^p known only to O(u^{c.prec}) at {place}, need O(u^{M})")

    y = hensel_artin_schreier(c, M)
    if not ls_is_zero_to(ls_sub(ls_sub(ls_frobenius(y), y), c), M):
        raise ClaimViolation(f"lifted y does not satisfy y^p - y = t x^p at {place}")
    logger.debug("Lifted x = %s at %s", xv, place)
    return WoundPoint(x=xv, y=y, place=str(place), precision=M)


def wound_point_from_rational(x: RationalFunction, place: Place, M: int) -> WoundPoint:
    """Expand a global x at the place and lift it."""
    e = embed_t(place, M + 2)
    xv = rf_expand_at(x, e, M)
    return wound_local_point(xv, place, M)


def verify_local_point(point: WoundPoint, place: Place) -> bool:
    """t x^p - (y^p - y) vanishes to O(u^M) and y lies in the maximal ideal."""
    M = point.precision
    e = embed_t(place, M + 2)
    residual = ls_sub(ls_mul(e.t_image, ls_frobenius(point.x)), ls_sub(ls_frobenius(point.y), point.y))
    return ls_is_zero_to(residual, M) and point.y.valuation() >= 1


def verify_global_point(x: RationalFunction, y: RationalFunction) -> bool:
    """Exact check of t x^p = y^p - y in F_p(t)."""
    t = RationalFunction.t(x.field)
    return t * x.frobenius() == y.frobenius() - y


def wound_global_search(field: FieldConfig, D: int) -> list[tuple[RationalFunction, RationalFunction]]:
    """
    Every (x, y) in F_p(t)^2 on t x^p = y^p - y with heights at most D.

    y runs over reduced P/Q (Q monic, degrees <= D) in enumeration order;
    x is the p-th root of (y^p - y)/t when it exists.
    """
    if D < 0:
        raise PreconditionError(f"height bound must be non-negative, got {D}")
    t = RationalFunction.t(field)
    points = []
    numerators = list(polynomials_up_to(field, D))
    for degree in range(D + 1):
        for Q in monic_polynomials(field, degree):
            for P in numerators:
                if P.is_zero() and degree > 0:
                    continue
                if not P.is_zero() and gcd(P, Q).degree > 0:
                    continue
                y = RationalFunction(P, Q)
                r = (y.frobenius() - y) / t
                x = RationalFunction.zero(field) if r.is_zero() else rf_is_pth_power(r)
                if x is not None and x.height() <= D:
                    points.append((x, y))
    logger.info("Wound global search to height %d: %d points", D, len(points))
    return points


def wound_pairing(point: WoundPoint, local_pair: DifferentialPair, place_degree: int = 1) -> Fraction:
    """<(x, y), (omega_1, omega_2)> = <x, omega_1> + <y, omega_2> in (1/p)Z/Z."""
    if not local_pair.is_local:
        raise PreconditionError("pairing is taken with a localized pair")
    total = pairing(point.x, local_pair.first, place_degree) + pairing(
        point.y, local_pair.second, place_degree
    )
    return total % 1


__all__ = [
    "wound_local_point",
    "wound_point_from_rational",
    "wound_global_search",
    "verify_local_point",
    "verify_global_point",
    "wound_pairing",
]
