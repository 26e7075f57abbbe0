"""
The Group Z/p

Globally q = id - C on differentials a dt of F_p(t); at a place q_v = id - C
on a du. In coefficients, q_v(a du) = b du reads

    a_i - a_{p i + p - 1}^(1/p) = b_i        for every i,

which splits into three regimes:

    i <= -2   a_{p i + p - 1} sits below a_i: back-substitution from the
              zeros below the principal part of b (unique)
    i  = -1   the Artin-Schreier equation a - a^(1/p) = b_{-1} over F_q
              (no solution, or exactly p)
    i >=  0   a_{p i + p - 1} = (a_i - b_i)^p forward; indices k >= 0 with
              p not dividing k + 1 are free

coker(q_v) is F_q / im(x - x^(1/p)) = F_q / ker(Tr), so the class of b is
Tr(b_{-1}) in F_p.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional

from cartier_lab.algebra.cartier import Differential, cartier_C, localize
from cartier_lab.algebra.gf import FieldConfig, FieldElement, artin_schreier_solve, trace_to_prime
from cartier_lab.algebra.poly import Polynomial, gcd, monic_polynomials, polynomials_up_to
from cartier_lab.algebra.ratfield import Place, RationalFunction, embed_t
from cartier_lab.algebra.series import LaurentSeries, ls_is_zero_to, ls_sub
from cartier_lab.config import get_logger
from cartier_lab.errors import ClaimViolation, PrecisionError, PreconditionError
from cartier_lab.obstruction.models import PlaceClassRow, SolveOutcome, SolveStatus, Witness

logger = get_logger(__name__)

FREE_PARAMS_ZP = [
    "a_i for i >= 0 with p not dividing i+1 (set to 0)",
    "a_-1 ranges over a coset of F_p (least representative chosen)",
]


def q_zp(a: RationalFunction) -> Differential:
    """q(a) = a dt - C(a dt), exactly over F_p(t)."""
    omega = Differential(a, "t")
    return omega - cartier_C(omega)


def apply_qv_zp(a: LaurentSeries) -> Differential:
    """q_v(a) = a du - C(a du) at a place."""
    omega = Differential(a, "u")
    return omega - cartier_C(omega)


def forced_negative_part(b: LaurentSeries) -> dict[int, FieldElement]:
    """
    The coefficients a_i, i <= -2, forced by a_i = b_i + a_{p i + p - 1}^(1/p).

    Every index below the principal part of b is forced to 0; only the
    nonzero values are returned.
    """
    p = b.field.p
    forced: dict[int, FieldElement] = {}
    if b.is_zero() or b.low > -2:
        return forced
    for i in range(b.low, -1):
        source = forced.get(p * i + p - 1)
        value = b.coefficient(i)
        if source is not None:
            value = value + source.frobenius_inv()
        if value:
            forced[i] = value
    return forced


def _artin_schreier_witness(c: FieldElement) -> Witness:
    return Witness(kind="trace", exponent=-1, value=str(c), trace=trace_to_prime(c))


def solve_qv_zp(
    b: Differential,
    M: int,
    free_values: Optional[dict[int, FieldElement]] = None,
    fiber_index: int = 0,
    place: Optional[str] = None,
) -> SolveOutcome:
    """
    Solve q_v(a du) = b du to O(u^M).

    The canonical solution sets every free coefficient to 0 and takes the
    least Artin-Schreier solution at index -1. It is returned to O(u^(pM)),
    which is what q_v needs to reproduce b to O(u^M).

    Args:
        b: Local target differential, known to at least O(u^M)
        M: Verification precision
        free_values: Optional values for free indices k >= 0 (p not dividing k + 1)
        fiber_index: Which Artin-Schreier solution to take (in field order)
        place: Label echoed into the outcome

    Raises:
        PrecisionError: b known to less than O(u^M)
        PreconditionError: a global differential, or a value for a non-free index
        ClaimViolation: the solution fails re-verification
    """
    if not b.is_local:
        raise PreconditionError("solve_qv_zp expects a local differential; localize first")
    target = b.coeff
    if target.prec < M:
        raise PrecisionError(f"target known only to O(u^{target.prec}), need O(u^{M})")
    field = target.field
    p = field.p
    free_values = free_values or {}
    for k in free_values:
        if k < 0 or (k + 1) % p == 0:
            raise PreconditionError(f"a_{k} is not a free coefficient")

    coeffs = forced_negative_part(target)
    logger.debug("Back-substitution fixed %d negative coefficients", len(coeffs))

    b_residue = target.coefficient(-1)
    fiber = artin_schreier_solve(b_residue)
    if not fiber:
        refuted = SolveOutcome(
            status=SolveStatus.NO_SOLUTION,
            witness=_artin_schreier_witness(b_residue),
            place=place,
            bound=M,
        )
        return refuted.model_copy(update={"verified": verify_outcome_zp(refuted, b)})
    coeffs[-1] = fiber[fiber_index % len(fiber)]

    for k in range(0, p * M):
        if (k + 1) % p == 0:
            i = (k + 1) // p - 1
            value = (coeffs.get(i, field.zero()) - target.coefficient(i)).frobenius()
        else:
            value = field(free_values.get(k, 0))
        if value:
            coeffs[k] = value

    outcome = SolveOutcome(
        status=SolveStatus.SOLVED,
        solution=LaurentSeries.from_dict(field, coeffs, p * M),
        free_params=list(FREE_PARAMS_ZP),
        place=place,
        bound=M,
    )
    if not verify_outcome_zp(outcome, b):
        raise ClaimViolation("canonical Z/p solution does not reproduce its target")
    return outcome.model_copy(update={"verified": True})


def trace_witness_holds(witness: Witness, b: LaurentSeries) -> bool:
    """The residue of b has the recorded value and a nonzero trace equal to the recorded one."""
    if witness.kind != "trace":
        return False
    c = b.coefficient(-1)
    trace = trace_to_prime(c)
    return trace != 0 and trace == witness.trace and str(c) == witness.value


def verify_outcome_zp(outcome: SolveOutcome, b: Differential) -> bool:
    """
    Re-check a Z/p outcome against its local target: a solution is pushed
    through q_v and compared to O(u^bound), a refutation has its trace
    witness recomputed from b.
    """
    if outcome.solved:
        image = apply_qv_zp(outcome.solution)
        return ls_is_zero_to(ls_sub(image.coeff, b.coeff), outcome.bound)
    return outcome.witness is not None and trace_witness_holds(outcome.witness, b.coeff)


def coker_class_zp(b: Differential) -> int:
    """
    The class of b in coker(q_v), labelled by Tr(b_{-1}) in F_p.

    For q = p the label is b_{-1} itself.
    """
    if not b.is_local:
        raise PreconditionError("cokernel classes are computed for local differentials")
    return trace_to_prime(b.coeff.coefficient(-1))


def x_family_zp(field: FieldConfig, N: int) -> Differential:
    """x_N = t^(e-1) dt / (1 - t^e) with e = (p-1)^N."""
    if N < 0:
        raise PreconditionError(f"N must be non-negative, got {N}")
    e = (field.p - 1) ** N
    return Differential(
        RationalFunction(
            Polynomial.monomial(field, e - 1),
            Polynomial.one(field) - Polynomial.monomial(field, e),
        ),
        "t",
    )


def class_row_zp(omega: Differential, place: Place, M: int) -> PlaceClassRow:
    """Integrality, residue, cokernel class and (for class 0) a verified preimage at one place."""
    e = embed_t(place, M)
    local = localize(omega, e, M)
    integral = local.coeff.valuation() >= 0
    b_residue = local.coeff.coefficient(-1)
    label = coker_class_zp(local)
    if integral and label != 0:
        raise ClaimViolation(f"integral differential with nonzero class {label} at {place}")
    outcome = solve_qv_zp(local, M, place=str(place)) if label == 0 else None
    if outcome is not None and not outcome.solved:
        raise ClaimViolation(f"class 0 at {place} but no local preimage")
    return PlaceClassRow(
        place=str(place),
        degree=place.degree,
        integral=integral,
        residue=str(b_residue),
        coker_class=label,
        outcome=outcome,
    )


def local_class_table_zp(
    field: FieldConfig, N: int, places: Iterable[Place], M: int, workers: int = 1
) -> list[PlaceClassRow]:
    """
    Sweep x_N over places; rows come back in place order whatever `workers` is.
    """
    omega = x_family_zp(field, N)
    ordered = sorted(places, key=Place.sort_key)
    logger.info("Class table for x_%d over %d places", N, len(ordered))
    if workers <= 1:
        return [class_row_zp(omega, place, M) for place in ordered]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda place: class_row_zp(omega, place, M), ordered))


def global_preimage_search_zp(omega: Differential, D: int) -> Optional[RationalFunction]:
    """
    The first a = P/Q (reduced, Q monic, deg P, deg Q <= D) with q(a) = omega.

    Enumeration order: a = 0 first, then Q by degree and coefficients, then P
    likewise. Only multiples of den(omega) are tried as Q, since the
    denominator of q(a) divides that of a.
    """
    if omega.is_local:
        raise PreconditionError("the global search takes a global differential")
    field = omega.field
    if omega.is_zero():
        return RationalFunction.zero(field)
    base = omega.coeff.den
    if base.degree > D:
        logger.debug("den(omega) has degree %d > D = %d: nothing to search", base.degree, D)
        return None

    numerators = [P for P in polynomials_up_to(field, D) if not P.is_zero()]
    for extra in range(D - base.degree + 1):
        for R in monic_polynomials(field, extra):
            Q = base * R
            for P in numerators:
                if gcd(P, Q).degree > 0:
                    continue
                a = RationalFunction(P, Q)
                if q_zp(a) == omega:
                    logger.info("Global preimage found: %s", a)
                    return a
    return None


__all__ = [
    "q_zp",
    "apply_qv_zp",
    "forced_negative_part",
    "solve_qv_zp",
    "trace_witness_holds",
    "verify_outcome_zp",
    "coker_class_zp",
    "x_family_zp",
    "class_row_zp",
    "local_class_table_zp",
    "global_preimage_search_zp",
]
