"""
Command orchestration.

Each cmd_* function runs one CLI command end-to-end from a validated
RunConfig and returns a Report. The solvers re-check their own outcomes
against the target and mark them verified; a report is verified only when
all of its outcomes, points and certificates are.
"""

from cartier_lab.algebra.ratfield import embed_t, parse_place, parse_rational
from cartier_lab.config import get_logger
from cartier_lab.obstruction.certificate import nonperiodicity_certificate, verify_certificate
from cartier_lab.obstruction.models import PlaceClassRow, SolveOutcome
from cartier_lab.obstruction.points import (
    verify_global_point,
    verify_local_point,
    wound_global_search,
    wound_point_from_rational,
)
from cartier_lab.obstruction.wound import (
    solve_qv_wound,
    unit_condition_holds,
    working_precision,
    x_family_wound,
)
from cartier_lab.obstruction.zp import (
    global_preimage_search_zp,
    local_class_table_zp,
    x_family_zp,
)
from cartier_lab.report import Report, RunConfig

logger = get_logger(__name__)

DEFAULT_ZP_PLACES = ("t",)
DEFAULT_WOUND_PLACES = ("t", "1/t")


def _row_verified(row: PlaceClassRow) -> bool:
    return row.outcome is None or row.outcome.verified


def _certificates(config: RunConfig) -> tuple[list[dict], bool]:
    """Certificates for every requested pair, and whether all of them hold."""
    entries = []
    ok = True
    for N, K in config.pairs:
        cert = nonperiodicity_certificate(config.p, N, K, config.pmax, config.lmax)
        checked = verify_certificate(cert)
        if not (checked and cert.complete):
            logger.error("Certificate for x_%d - x_%d is incomplete or does not re-verify", N, K)
            ok = False
        entry = cert.to_json_dict()
        entry["verified"] = checked
        entries.append(entry)
    return entries, ok


def cmd_zp(config: RunConfig) -> Report:
    """Class tables for x_N, then global searches and certificates for x_N - x_K."""
    field = config.field()
    places = config.resolve_places(DEFAULT_ZP_PLACES)
    M = config.precision
    verified = True

    tables = []
    csv_rows = []
    for N in config.ns:
        rows = local_class_table_zp(field, N, places, M, workers=config.workers)
        verified = verified and all(_row_verified(row) for row in rows)
        tables.append({"N": N, "rows": [row.to_json_dict() for row in rows]})
        csv_rows.extend({"N": N, **row.to_csv_row()} for row in rows)

    searches = []
    for N, K in config.pairs:
        omega = x_family_zp(field, N) - x_family_zp(field, K)
        found = global_preimage_search_zp(omega, config.search_degree)
        if found is not None:
            logger.error("x_%d - x_%d has the global preimage %s", N, K, found)
            verified = False
        searches.append(
            {
                "N": N,
                "K": K,
                "bound": config.search_degree,
                "preimage": None if found is None else str(found),
            }
        )

    certificates, certs_ok = _certificates(config)
    verified = verified and certs_ok
    logger.info("zp: %d tables, %d pairs", len(tables), len(config.pairs))
    return Report(
        command="zp",
        config=config.echo(),
        results={"tables": tables, "searches": searches, "certificates": certificates},
        verified=verified,
        csv_rows=csv_rows,
    )


def _wound_entry(outcome: SolveOutcome, unit: bool | None = None) -> dict:
    entry = outcome.to_json_dict()
    if unit is not None:
        entry["unitCondition"] = unit
    return entry


def cmd_wound(config: RunConfig) -> Report:
    """Solve q_v = x_N at each place, and q_v = x_N - x_K at [t]."""
    field = config.field()
    M = config.precision
    target = x_family_wound(field, config.n)
    places = config.resolve_places(DEFAULT_WOUND_PLACES)

    family = []
    csv_rows = []
    outcomes = []
    for place in places:
        outcome = solve_qv_wound(target, place, M)
        unit = None
        if not place.is_infinity:
            unit = unit_condition_holds(embed_t(place, working_precision(field.p, M)))
        outcomes.append(outcome)
        family.append(_wound_entry(outcome, unit))
        csv_rows.append(
            {
                "N": config.n,
                "place": str(place),
                "degree": place.degree,
                "status": outcome.status.value,
                "witness": "" if outcome.witness is None else outcome.witness.kind,
                "bound": outcome.bound,
            }
        )

    results = {"N": config.n, "family": family}
    if config.k is not None:
        difference = target - x_family_wound(field, config.k)
        at_t = parse_place(field, "t")
        outcome = solve_qv_wound(difference, at_t, M)
        outcomes.append(outcome)
        results["K"] = config.k
        results["difference"] = _wound_entry(outcome)

    verified = all(outcome.verified for outcome in outcomes)
    return Report(
        command="wound",
        config=config.echo(),
        results=results,
        verified=verified,
        csv_rows=csv_rows,
    )


def cmd_points(config: RunConfig) -> Report:
    """Lift each x to a local point; optionally enumerate global points."""
    field = config.field()
    M = config.precision
    results: dict = {}
    csv_rows = []
    verified = True

    if config.xs:
        place = parse_place(field, config.place)
        points = []
        for text in config.xs:
            point = wound_point_from_rational(parse_rational(field, text), place, M)
            if not verify_local_point(point, place):
                logger.error("Local point for x = %s at %s does not re-verify", text, place)
                verified = False
            points.append({"input": text, **point.to_json_dict()})
            csv_rows.append({"place": point.place, "x": text, "y": point.y.to_text(), "bound": M})
        results["points"] = points

    if config.global_search is not None:
        found = wound_global_search(field, config.global_search)
        if not all(verify_global_point(x, y) for x, y in found):
            logger.error("Global search returned a pair off the curve")
            verified = False
        results["global"] = {
            "bound": config.global_search,
            "points": [{"x": str(x), "y": str(y)} for x, y in found],
        }

    return Report(
        command="points",
        config=config.echo(),
        results=results,
        verified=verified,
        csv_rows=csv_rows,
    )


def cmd_cert(config: RunConfig) -> Report:
    """Standalone nonperiodicity certificates."""
    certificates, ok = _certificates(config)
    csv_rows = [
        {
            "N": entry["N"],
            "K": entry["K"],
            "Pmax": config.pmax,
            "Lmax": config.lmax,
            "refuted": len(entry["refutations"]),
            "inconclusive": len(entry["inconclusive"]),
        }
        for entry in certificates
    ]
    return Report(
        command="cert",
        config=config.echo(),
        results={"certificates": certificates},
        verified=ok,
        csv_rows=csv_rows,
    )


COMMANDS = {
    "zp": cmd_zp,
    "wound": cmd_wound,
    "points": cmd_points,
    "cert": cmd_cert,
}
