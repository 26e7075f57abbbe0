"""
Invariant Self-Test

A registry of property checks, one per invariant of the library, run with
deterministic seeds by `cartier-lab selftest`. Checks are registered with
the @invariant decorator and receive a seeded random.Random; any exception
a check raises is recorded as its failure.
"""

import random
from dataclasses import dataclass
from functools import wraps
from itertools import combinations
from typing import Callable, Optional

from cartier_lab.algebra.cartier import (
    Differential,
    antiderivative,
    cartier_C,
    cartier_inv,
    d,
    dlog,
    residue,
)
from cartier_lab.algebra.gf import (
    artin_schreier_image,
    artin_schreier_solve,
    get_field,
    solve_mod_p,
    trace_to_prime,
)
from cartier_lab.algebra.poly import Polynomial, monic_irreducibles
from cartier_lab.algebra.ratfield import (
    Place,
    RationalFunction,
    detect_eventual_period,
    embed_t,
    rational_from_periodic,
    rf_expand_at,
    rf_is_pth_power,
)
from cartier_lab.algebra.series import (
    LaurentSeries,
    hensel_artin_schreier,
    ls_add,
    ls_compose,
    ls_derivative,
    ls_frobenius,
    ls_inv,
    ls_is_zero_to,
    ls_mul,
    ls_pbasis_compose,
    ls_pbasis_decompose,
    ls_pth_root,
    ls_sub,
    ls_substitute_polynomial,
    ls_truncate,
)
from cartier_lab.config import get_logger
from cartier_lab.errors import PrecisionError
from cartier_lab.obstruction.certificate import nonperiodicity_certificate, verify_certificate
from cartier_lab.obstruction.points import wound_global_search, wound_local_point
from cartier_lab.obstruction.wound import (
    solve_qv_wound,
    verify_outcome,
    x_family_wound,
)
from cartier_lab.obstruction.zp import (
    apply_qv_zp,
    coker_class_zp,
    global_preimage_search_zp,
    solve_qv_zp,
    x_family_zp,
)
from cartier_lab.report import Report, RunConfig

logger = get_logger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one registered check."""

    name: str
    module: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "module": self.module, "passed": self.passed, "detail": self.detail}


# Check registry: name -> (module, function)
_CHECK_REGISTRY: dict[str, tuple[str, Callable[[random.Random], None]]] = {}


def invariant(name: str, module: str):
    """
    Register a function as a self-test check.

    Example:
        >>> @invariant("frobenius_roundtrip", module="gf")
        ... def check(rng):
        ...     assert ...
    """

    def decorator(func: Callable[[random.Random], None]) -> Callable[[random.Random], None]:
        @wraps(func)
        def wrapper(rng: random.Random) -> None:
            return func(rng)

        _CHECK_REGISTRY[name] = (module, wrapper)
        return wrapper

    return decorator


def get_checks(module: Optional[str] = None) -> list[tuple[str, str, Callable]]:
    """Registered checks as (name, module, function), in registration order."""
    return [
        (name, mod, func)
        for name, (mod, func) in _CHECK_REGISTRY.items()
        if module is None or mod == module
    ]


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------


F3 = get_field(3)


def _random_series(rng: random.Random, field, low: int, prec: int) -> LaurentSeries:
    coeffs = [field.from_index(rng.randrange(field.q)) for _ in range(prec - low)]
    return LaurentSeries(field, low, coeffs, prec)


def _random_poly(rng: random.Random, field, degree: int) -> Polynomial:
    return Polynomial(field, [rng.randrange(field.p) for _ in range(degree + 1)])


def _random_rational(rng: random.Random, field, degree: int) -> RationalFunction:
    den = _random_poly(rng, field, degree)
    while den.is_zero():
        den = _random_poly(rng, field, degree)
    return RationalFunction(_random_poly(rng, field, degree), den)


# ---------------------------------------------------------------------------
# gf
# ---------------------------------------------------------------------------


@invariant("frobenius_bijection", module="gf")
def _frobenius_bijection(rng: random.Random) -> None:
    for m in (1, 2, 3, 4):
        field = get_field(3, m)
        for x in field.elements():
            assert x.frobenius().frobenius_inv() == x
            assert x.frobenius_inv().frobenius() == x


@invariant("artin_schreier_fibers", module="gf")
def _artin_schreier_fibers(rng: random.Random) -> None:
    for m in (1, 2, 3, 4):
        field = get_field(3, m)
        for c in field.elements():
            roots = artin_schreier_solve(c)
            assert (len(roots) == 3) == (trace_to_prime(c) == 0)
            assert len(roots) in (0, 3)
            for x in roots:
                assert x - x.frobenius_inv() == c
            assert artin_schreier_solve(c, "linear") == artin_schreier_solve(c, "enumerate")


@invariant("cokernel_order_p", module="gf")
def _cokernel_order(rng: random.Random) -> None:
    for m in (1, 2, 3):
        field = get_field(3, m)
        image = artin_schreier_image(field)
        assert field.q // len(image) == 3


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


@invariant("hensel_artin_schreier_root", module="series")
def _hensel_artin_schreier(rng: random.Random) -> None:
    for _ in range(10):
        M = rng.randrange(2, 40)
        c = _random_series(rng, F3, 1, M)
        X = hensel_artin_schreier(c, M)
        assert ls_is_zero_to(ls_sub(ls_sub(ls_frobenius(X), X), c), M)


@invariant("pth_root_roundtrip", module="series")
def _pth_root_roundtrip(rng: random.Random) -> None:
    for _ in range(200):
        x = _random_series(rng, F3, rng.randrange(-3, 2), 20)
        assert ls_pth_root(ls_frobenius(x)) == x


@invariant("pbasis_recomposition", module="series")
def _pbasis_recomposition(rng: random.Random) -> None:
    for _ in range(100):
        x = _random_series(rng, F3, rng.randrange(-4, 1), 30)
        parts = ls_pbasis_decompose(x)
        assert ls_pbasis_compose(parts).agrees_with(x, 30 - 2)


_SUBSTITUTION = ls_add(LaurentSeries.monomial(F3, 1), LaurentSeries.monomial(F3, 2))


def _pth_root_of_product(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    return ls_pth_root(ls_mul(ls_frobenius(x), ls_frobenius(y)))


# Each step maps (x, y) to a series; y is a fresh random operand.
_PIPELINE_STEPS: dict[str, Callable[[LaurentSeries, LaurentSeries], LaurentSeries]] = {
    "add": ls_add,
    "mul": ls_mul,
    "inv": lambda x, y: ls_inv(x),
    "derivative": lambda x, y: ls_derivative(x),
    "pth_root": _pth_root_of_product,
    "decompose": lambda x, y: ls_pbasis_decompose(x)[1],
    "compose": lambda x, y: ls_compose(x, _SUBSTITUTION),
}


@invariant("precision_soundness", module="series")
def _precision_soundness(rng: random.Random) -> None:
    """
    Pipelines of up to five steps run on O(u^20) truncations agree with the
    same pipeline on O(u^40) inputs to the precision they claim.
    """
    names = sorted(_PIPELINE_STEPS)
    for _ in range(50):
        high = _random_series(rng, F3, rng.randrange(-2, 2), 40)
        low = ls_truncate(high, 20)
        for _ in range(rng.randrange(1, 6)):
            name = rng.choice(names)
            if name == "compose" and low.valuation() < -6:
                continue
            y = _random_series(rng, F3, rng.randrange(-2, 2), 40)
            step = _PIPELINE_STEPS[name]
            try:
                low = step(low, ls_truncate(y, 20))
            except PrecisionError:
                # nothing left to invert
                break
            high = step(high, y)
            low = ls_truncate(low, 60)
            high = ls_truncate(high, low.prec + 20)
            assert high.agrees_with(low, low.prec), name


@invariant("derivative_kills_pth_powers", module="series")
def _derivative_kills(rng: random.Random) -> None:
    for _ in range(10):
        x = _random_series(rng, F3, 0, 10)
        assert ls_derivative(ls_frobenius(x)).is_zero()


# ---------------------------------------------------------------------------
# ratfield
# ---------------------------------------------------------------------------


@invariant("periodic_reconstruction", module="ratfield")
def _periodic_reconstruction(rng: random.Random) -> None:
    at_t = embed_t(Place.parse(F3, "t"), 1)
    for _ in range(100):
        num = _random_poly(rng, F3, rng.randrange(0, 4))
        den = _random_poly(rng, F3, rng.randrange(1, 4))
        if den.coeff(0) == 0:
            den = den + 1
        f = RationalFunction(num, den)
        expansion = rf_expand_at(f, at_t, 300)
        coeffs = [expansion.coefficient(i).to_prime() for i in range(300)]
        found = detect_eventual_period(coeffs, 100, 20)
        assert found is not None
        L, P = found
        assert rational_from_periodic(coeffs, L, P, at_t) == f


@invariant("embedding_substitution", module="ratfield")
def _embedding_substitution(rng: random.Random) -> None:
    M = 12
    for degree in (1, 2, 3):
        for pi in monic_irreducibles(F3, degree):
            e = embed_t(Place.finite(pi), M)
            image = ls_substitute_polynomial(pi, e.t_image, M)
            assert ls_is_zero_to(ls_sub(image, LaurentSeries.monomial(e.residue_field, 1)), M)


@invariant("expansion_homomorphism", module="ratfield")
def _expansion_homomorphism(rng: random.Random) -> None:
    e = embed_t(Place.parse(F3, "t+1"), 20)
    for _ in range(10):
        f = _random_rational(rng, F3, 3)
        g = _random_rational(rng, F3, 3)
        if f.is_zero() or g.is_zero():
            continue
        lhs = rf_expand_at(f * g, e, 15)
        rhs = ls_mul(rf_expand_at(f, e, 25), rf_expand_at(g, e, 25))
        assert lhs.agrees_with(rhs, 15)


# ---------------------------------------------------------------------------
# cartier
# ---------------------------------------------------------------------------


@invariant("cartier_kills_exact", module="cartier")
def _cartier_kills_exact(rng: random.Random) -> None:
    for _ in range(200):
        assert cartier_C(d(_random_series(rng, F3, -3, 30))).coeff.is_zero()
        f = _random_rational(rng, F3, rng.randrange(0, 9))
        assert cartier_C(d(f)).is_zero()


@invariant("cartier_inverse_section", module="cartier")
def _cartier_inverse(rng: random.Random) -> None:
    for _ in range(200):
        omega = Differential(_random_series(rng, F3, -3, 30), "u")
        assert cartier_C(cartier_inv(omega)).coeff == omega.coeff


@invariant("kernel_antidifferentiates", module="cartier")
def _kernel_antiderivative(rng: random.Random) -> None:
    for _ in range(200):
        omega = d(_random_series(rng, F3, -3, 30))
        h = antiderivative(omega)
        assert ls_is_zero_to(ls_sub(d(h).coeff, omega.coeff), omega.coeff.prec)


@invariant("d_detects_pth_powers", module="cartier")
def _d_pth_powers(rng: random.Random) -> None:
    for _ in range(20):
        f = _random_rational(rng, F3, rng.randrange(0, 4))
        for candidate in (f, f.frobenius()):
            assert d(candidate).is_zero() == (rf_is_pth_power(candidate) is not None)


@invariant("semilinearity", module="cartier")
def _semilinearity(rng: random.Random) -> None:
    F9 = get_field(3, 2)
    for _ in range(100):
        a = F9.from_index(rng.randrange(1, 9))
        omega = Differential(_random_series(rng, F9, -3, 30), "u")
        lhs = cartier_C(omega * a.frobenius()).coeff
        rhs = cartier_C(omega).coeff
        assert lhs == LaurentSeries(F9, rhs.low, [a * c for c in rhs.coeffs], rhs.prec)


@invariant("residue_invariance", module="cartier")
def _residue_invariance(rng: random.Random) -> None:
    for _ in range(100):
        omega = _random_series(rng, F3, -3, 10)
        unit = _random_series(rng, F3, 0, 12)
        if unit.coefficient(0) == 0:
            unit = unit + 1
        s = ls_mul(LaurentSeries.monomial(F3, 1), unit)
        pulled = ls_mul(ls_compose(omega, s), ls_derivative(s))
        assert residue(Differential(pulled, "u")) == omega.coefficient(-1)


@invariant("dlog_fixed_by_cartier", module="cartier")
def _dlog_fixed(rng: random.Random) -> None:
    for _ in range(10):
        f = _random_rational(rng, F3, 3)
        if f.is_zero():
            continue
        form = dlog(f)
        assert cartier_C(form) == form


# ---------------------------------------------------------------------------
# obstruction
# ---------------------------------------------------------------------------


@invariant("zp_roundtrip", module="obstruction")
def _zp_roundtrip(rng: random.Random) -> None:
    for _ in range(20):
        b = Differential(_random_series(rng, F3, rng.randrange(-6, 0), 12), "u")
        outcome = solve_qv_zp(b, 12)
        assert outcome.solved == (coker_class_zp(b) == 0)
        assert verify_outcome(outcome, b)


@invariant("zp_solver_matches_span", module="obstruction")
def _zp_solver_matches_span(rng: random.Random) -> None:
    """Solvability agrees with membership in the F_3 span of q_v(u^k), k in [-4, 24), read to O(u^8)."""
    low, M = -4, 8
    columns = [apply_qv_zp(LaurentSeries.monomial(F3, k, 1, 3 * M)).coeff for k in range(low, 3 * M)]
    matrix = [[column.coefficient(i).to_prime() for column in columns] for i in range(low, M)]
    for _ in range(50):
        coeffs = [0] * (M - low)
        for position in rng.sample(range(M - low), rng.randrange(0, 5)):
            coeffs[position] = rng.randrange(1, 3)
        particular, _ = solve_mod_p(matrix, coeffs, 3)
        outcome = solve_qv_zp(Differential(LaurentSeries(F3, low, coeffs, M), "u"), M)
        assert outcome.solved == (particular is not None), coeffs


@invariant("zp_family_distinct", module="obstruction")
def _zp_family_distinct(rng: random.Random) -> None:
    for N, K in combinations(range(4), 2):
        omega = x_family_zp(F3, N) - x_family_zp(F3, K)
        assert global_preimage_search_zp(omega, 2) is None
        cert = nonperiodicity_certificate(3, N, K, 20, 20)
        assert cert.complete and verify_certificate(cert)


@invariant("zp_free_parameters", module="obstruction")
def _zp_free_parameters(rng: random.Random) -> None:
    b = Differential(LaurentSeries.constant(F3, 1, 10), "u")
    for _ in range(10):
        k = rng.choice([i for i in range(30) if (i + 1) % 3])
        outcome = solve_qv_zp(b, 10, free_values={k: F3(rng.randrange(1, 3))})
        image = apply_qv_zp(outcome.solution)
        assert ls_is_zero_to(ls_sub(image.coeff, b.coeff), 10)


@invariant("wound_family", module="obstruction")
def _wound_family(rng: random.Random) -> None:
    at_t = Place.parse(F3, "t")
    for N, K in ((1, 2), (1, 3), (2, 3)):
        target = x_family_wound(F3, N) - x_family_wound(F3, K)
        assert not solve_qv_wound(target, at_t, 10).solved
    for text in ("1/t", "t+1", "t+2"):
        outcome = solve_qv_wound(x_family_wound(F3, 1), Place.parse(F3, text), 10)
        assert outcome.solved and outcome.verified


@invariant("certificate_refutes", module="obstruction")
def _certificate(rng: random.Random) -> None:
    cert = nonperiodicity_certificate(3, 0, 1, 12, 12)
    assert cert.complete and verify_certificate(cert)


@invariant("wound_points", module="obstruction")
def _wound_points(rng: random.Random) -> None:
    at_t = Place.parse(F3, "t")
    for _ in range(5):
        x = _random_series(rng, F3, 0, 12)
        point = wound_local_point(x, at_t, 12)
        assert point.precision == 12
    points = wound_global_search(F3, 1)
    assert {(str(x), str(y)) for x, y in points} == {("0", "0"), ("0", "1"), ("0", "2")}


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def run_checks(seed: int = 0, module: Optional[str] = None) -> list[CheckResult]:
    """Run the registered checks; each gets its own Random seeded from (seed, name)."""
    results = []
    for name, mod, func in get_checks(module):
        rng = random.Random(f"{seed}:{name}")
        try:
            func(rng)
        except Exception as e:
            logger.error("Check %s failed: %s: %s", name, type(e).__name__, e)
            results.append(CheckResult(name, mod, False, f"{type(e).__name__}: {e}"))
            continue
        logger.debug("Check %s passed", name)
        results.append(CheckResult(name, mod, True))
    return results


def cmd_selftest(config: RunConfig) -> Report:
    """Run the invariant suite and report the pass/fail matrix."""
    results = run_checks(config.seed, config.only)
    passed = sum(r.passed for r in results)
    logger.info("Self-test: %d/%d checks passed", passed, len(results))
    return Report(
        command="selftest",
        config=config.echo(),
        results={
            "checks": [r.to_json_dict() for r in results],
            "passed": passed,
            "total": len(results),
        },
        verified=passed == len(results),
        csv_rows=[r.to_json_dict() for r in results],
    )


__all__ = ["CheckResult", "invariant", "get_checks", "run_checks", "cmd_selftest"]
