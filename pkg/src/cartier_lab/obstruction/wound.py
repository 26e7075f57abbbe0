"""
The Wound Group t x^p = y^p - y

Globally q(eta) = (C(t eta), eta - C(eta)); at a place with t = T(u),
q_v(a du) = (C(T a du), a du - C(a du)). The family x_N = (t^-N dt, 0),
N > 0, is obstructed at [t] and locally trivial elsewhere:

    [t]     T = u. The second equation forces the negative part of a from
            the second target component; C(u a) then has its negative
            coefficients fixed, and a mismatch with the first component
            refutes the target.
    [1/t]   T = 1/u. With a = a_0^p + a_{p-1}^p u^(p-1) the equations become
            a_0 = u b_1 and X^p - X = -a_0^p u for X = a_{p-1} u.
    other   T = sum_j t_j^p u^j with t_1 a unit. With
            a = z^p u^(p-2) + w^p u^(p-1) the second equation gives
            w = f(z) = sum_s z^(p^(s+1)) u^((p-1)p^s - 1) and the first
            becomes t_1 z + t_0 f(z) = b_1, solved by the fixed-point
            iteration z <- (b_1 - t_0 f(z)) / t_1, which converges u-adically
            since f(z) - f(z') = O(u^(p v(z - z'))).
"""

from typing import Optional, Union

from cartier_lab.algebra.cartier import (
    Differential,
    DifferentialPair,
    cartier_C,
    localize_pair,
)
from cartier_lab.algebra.gf import FieldConfig, artin_schreier_solve, trace_to_prime
from cartier_lab.algebra.poly import Polynomial
from cartier_lab.algebra.ratfield import LocalEmbedding, Place, RationalFunction, embed_t
from cartier_lab.algebra.series import (
    LaurentSeries,
    hensel_artin_schreier,
    ls_frobenius,
    ls_inv,
    ls_is_zero_to,
    ls_mul,
    ls_neg,
    ls_pbasis_decompose,
    ls_shift,
    ls_sub,
    ls_truncate,
)
from cartier_lab.config import get_logger
from cartier_lab.errors import (
    ClaimViolation,
    HenselError,
    PreconditionError,
    UnsupportedTargetError,
)
from cartier_lab.obstruction.models import SolveOutcome, SolveStatus, Witness
from cartier_lab.obstruction.zp import (
    apply_qv_zp,
    forced_negative_part,
    trace_witness_holds,
    verify_outcome_zp,
)

logger = get_logger(__name__)


def q_wound(eta: Differential) -> DifferentialPair:
    """(C(t eta), eta - C(eta)) over F_p(t)."""
    if eta.is_local:
        raise PreconditionError("q_wound takes a global differential; use apply_qv_wound locally")
    t = RationalFunction.t(eta.field)
    return DifferentialPair(cartier_C(eta * t), eta - cartier_C(eta))


def x_family_wound(field: FieldConfig, N: int) -> DifferentialPair:
    """x_N = (t^-N dt, 0) for N > 0."""
    if N <= 0:
        raise PreconditionError(f"the wound family is indexed by N > 0, got {N}")
    first = RationalFunction(Polynomial.one(field), Polynomial.monomial(field, N))
    return DifferentialPair(
        Differential(first, "t"),
        Differential(RationalFunction.zero(field), "t"),
    )


def apply_qv_wound(a: LaurentSeries, e: LocalEmbedding) -> DifferentialPair:
    """q_v(a du) = (C(T a du), a du - C(a du))."""
    return DifferentialPair(
        cartier_C(Differential(ls_mul(e.t_image, a), "u")),
        apply_qv_zp(a),
    )


def pbasis_of_t(e: LocalEmbedding) -> list[LaurentSeries]:
    """(t_0, ..., t_{p-1}) with T = sum_j t_j^p u^j."""
    return ls_pbasis_decompose(e.t_image)


def unit_condition_holds(e: LocalEmbedding) -> bool:
    """True if t_1 is a unit at the place."""
    return pbasis_of_t(e)[1].valuation() == 0


def _is_t_place(place: Place) -> bool:
    return not place.is_infinity and place.poly.degree == 1 and not place.poly.coeffs[0]


# ---------------------------------------------------------------------------
# Local solvers
# ---------------------------------------------------------------------------


FREE_PARAMS_AT_T = [
    "a_i for i >= 0 with i mod p not in {p-2, p-1} (set to 0)",
    "a_-1 ranges over a coset of F_p (least representative chosen)",
]

FREE_PARAMS_ANSATZ = [
    "p-basis components a_j of a for j < p-2 (set to 0)",
]


def _solve_at_t(
    b1: LaurentSeries, b2: LaurentSeries, M: int, place: str
) -> SolveOutcome:
    field = b1.field
    p = field.p
    coeffs = forced_negative_part(b2)

    lowest = min(-1, b1.low if b1.coeffs else -1, b2.low if b2.coeffs else -1)
    for j in range(lowest, 0):
        forced = coeffs.get(p * j + p - 2, field.zero()).frobenius_inv()
        value = b1.coefficient(j)
        if forced != value:
            logger.debug("First component disagrees at u^%d: %s vs forced %s", j, value, forced)
            return SolveOutcome(
                status=SolveStatus.NO_SOLUTION,
                witness=Witness(
                    kind="negative_coefficient", exponent=j, value=str(value), forced=str(forced)
                ),
                place=place,
                bound=M,
            )

    b_residue = b2.coefficient(-1)
    fiber = artin_schreier_solve(b_residue)
    if not fiber:
        return SolveOutcome(
            status=SolveStatus.NO_SOLUTION,
            witness=Witness(kind="trace", exponent=-1, value=str(b_residue), trace=trace_to_prime(b_residue)),
            place=place,
            bound=M,
        )
    coeffs[-1] = fiber[0]

    for k in range(0, p * M):
        if k % p == p - 2:
            value = b1.coefficient((k - p + 2) // p).frobenius()
        elif (k + 1) % p == 0:
            i = (k + 1) // p - 1
            value = (coeffs.get(i, field.zero()) - b2.coefficient(i)).frobenius()
        else:
            continue
        if value:
            coeffs[k] = value
    return SolveOutcome(
        status=SolveStatus.SOLVED,
        solution=LaurentSeries.from_dict(field, coeffs, p * M),
        free_params=list(FREE_PARAMS_AT_T),
        place=place,
        bound=M,
    )


def _require_zero_second(b2: LaurentSeries, place: str) -> None:
    if not b2.is_zero():
        raise UnsupportedTargetError(
            f"the construction at {place} covers targets with zero second component"
        )


def _solve_at_infinity(b1: LaurentSeries, b2: LaurentSeries, M: int, place: str) -> SolveOutcome:
    _require_zero_second(b2, place)
    p = b1.field.p
    a0 = ls_truncate(ls_shift(b1, 1), M + 1)
    if a0.valuation() < 0:
        raise UnsupportedTargetError(f"u * b_1 is not integral at {place}")
    rhs = ls_neg(ls_shift(ls_frobenius(a0), 1))
    X = hensel_artin_schreier(rhs, M + 2)
    a_top = ls_shift(X, -1)
    a = ls_truncate(
        ls_frobenius(a0) + ls_shift(ls_frobenius(a_top), p - 1),
        p * (M + 1),
    )
    return SolveOutcome(
        status=SolveStatus.SOLVED,
        solution=a,
        free_params=list(FREE_PARAMS_ANSATZ),
        place=place,
        bound=M,
    )


def _series_f(z: LaurentSeries, M: int) -> LaurentSeries:
    """f(z) = sum_s z^(p^(s+1)) u^((p-1)p^s - 1) to O(u^M), via X^p - X = -z^p u^(p-1)."""
    p = z.field.p
    rhs = ls_neg(ls_shift(ls_frobenius(z), p - 1))
    return ls_shift(hensel_artin_schreier(rhs, M + 1), -1)


def _solve_at_finite(
    e: LocalEmbedding, b1: LaurentSeries, b2: LaurentSeries, M: int, place: str
) -> SolveOutcome:
    """
    Ansatz a = z^p u^(p-2) + f(z)^p u^(p-1) with z found by fixed-point
    iteration; each pass at least multiplies the u-adic agreement by p.
    """
    _require_zero_second(b2, place)
    p = b1.field.p
    parts = pbasis_of_t(e)
    t0, t1 = parts[0], parts[1]
    if t1.valuation() != 0:
        raise ClaimViolation(f"p-basis coefficient t_1 is not a unit at {place}")
    if b1.valuation() < 0:
        raise UnsupportedTargetError(f"first component is not integral at {place}")

    bound = M + 1
    t1_inv = ls_inv(t1, bound)
    z = ls_truncate(ls_mul(b1, t1_inv), bound)
    for step in range(bound + 2):
        w = _series_f(z, bound)
        update = ls_truncate(ls_mul(ls_sub(b1, ls_mul(t0, w)), t1_inv), bound)
        if update.agrees_with(z, bound):
            break
        z = update
        logger.debug("Fixed-point step %d at %s", step + 1, place)
    else:
        raise HenselError(f"iteration for a_(p-2) did not settle at {place}")

    w = _series_f(z, bound)
    a = ls_truncate(
        ls_shift(ls_frobenius(z), p - 2) + ls_shift(ls_frobenius(w), p - 1),
        p * bound,
    )
    return SolveOutcome(
        status=SolveStatus.SOLVED,
        solution=a,
        free_params=list(FREE_PARAMS_ANSATZ),
        place=place,
        bound=M,
    )


def working_precision(p: int, M: int) -> int:
    """Embedding precision that lets q_v of a solution reach O(u^M)."""
    return p * (M + 2)


def solve_qv_wound_local(
    target: DifferentialPair, e: LocalEmbedding, M: int
) -> SolveOutcome:
    """
    Solve q_v(a du) = target for a target already localized at e.

    Raises:
        UnsupportedTargetError: outside what the construction at this place covers
        ClaimViolation: unit condition fails, or a solution does not re-verify
    """
    place = e.place
    label = str(place)
    b1, b2 = target.first.coeff, target.second.coeff
    if b1.prec < M or b2.prec < M:
        raise PreconditionError(f"target must be known to O(u^{M})")
    if _is_t_place(place):
        outcome = _solve_at_t(b1, b2, M, label)
    elif place.is_infinity:
        outcome = _solve_at_infinity(b1, b2, M, label)
    else:
        outcome = _solve_at_finite(e, b1, b2, M, label)

    verified = verify_outcome(outcome, target, e)
    if outcome.solved and not verified:
        raise ClaimViolation(f"wound solution at {label} does not reproduce its target")
    if not verified:
        logger.warning("Refutation at %s does not re-derive from its target", label)
    return outcome.model_copy(update={"verified": verified})


def solve_qv_wound(target: DifferentialPair, place: Place, M: int) -> SolveOutcome:
    """
    Solve q_v(a du) = target at the place, for a global target pair.

    The target is localized with the working precision its construction
    needs; the outcome is asserted to O(u^M).
    """
    if target.is_local:
        raise PreconditionError("solve_qv_wound takes a global pair; use solve_qv_wound_local")
    field = target.first.field
    e = embed_t(place, working_precision(field.p, M))
    local = localize_pair(target, e, M + 2)
    logger.debug("Solving wound target at %s to O(u^%d)", place, M)
    return solve_qv_wound_local(local, e, M)


# ---------------------------------------------------------------------------
# Re-verification
# ---------------------------------------------------------------------------


def _verify_witness(witness: Witness, b1: LaurentSeries, b2: LaurentSeries) -> bool:
    if witness.kind == "trace":
        return trace_witness_holds(witness, b2)
    if witness.kind == "negative_coefficient":
        p = b2.field.p
        j = witness.exponent
        if j >= 0:
            return False
        forced = forced_negative_part(b2).get(p * j + p - 2, b2.field.zero()).frobenius_inv()
        value = b1.coefficient(j)
        return forced != value and str(forced) == witness.forced and str(value) == witness.value
    return False


def verify_outcome(
    outcome: SolveOutcome,
    target: Union[Differential, DifferentialPair],
    e: Optional[LocalEmbedding] = None,
) -> bool:
    """
    Re-check an outcome against its local target.

    Solved outcomes are pushed through q_v (Z/p for a single differential,
    the wound map at `e` for a pair) and compared to O(u^bound); NoSolution
    witnesses are re-derived from the target.
    """
    M = outcome.bound
    if isinstance(target, DifferentialPair):
        b1, b2 = target.first.coeff, target.second.coeff
        if outcome.solved:
            if e is None:
                raise PreconditionError("verifying a wound solution needs the embedding")
            image = apply_qv_wound(outcome.solution, e)
            return ls_is_zero_to(ls_sub(image.first.coeff, b1), M) and ls_is_zero_to(
                ls_sub(image.second.coeff, b2), M
            )
        return outcome.witness is not None and _verify_witness(outcome.witness, b1, b2)

    return verify_outcome_zp(outcome, target)


__all__ = [
    "q_wound",
    "x_family_wound",
    "apply_qv_wound",
    "pbasis_of_t",
    "unit_condition_holds",
    "working_precision",
    "solve_qv_wound_local",
    "solve_qv_wound",
    "verify_outcome",
]
