"""
Obstruction Computations

Local maps q_v, canonical preimages with refutation witnesses, cokernel
classes, bounded global searches and nonperiodicity certificates for the
groups Z/p and t x^p = y^p - y.
"""

from .models import (
    Constraint,
    PeriodicityCertificate,
    PlaceClassRow,
    Refutation,
    SolveOutcome,
    SolveStatus,
    TelescopedChain,
    Witness,
    WoundPoint,
)
from .zp import (
    apply_qv_zp,
    coker_class_zp,
    global_preimage_search_zp,
    local_class_table_zp,
    q_zp,
    solve_qv_zp,
    x_family_zp,
)
from .certificate import (
    nonperiodicity_certificate,
    telescoped_chain,
    verify_certificate,
    verify_refutation,
)
from .wound import (
    apply_qv_wound,
    q_wound,
    solve_qv_wound,
    solve_qv_wound_local,
    unit_condition_holds,
    verify_outcome,
    x_family_wound,
)
from .points import (
    verify_global_point,
    verify_local_point,
    wound_global_search,
    wound_local_point,
    wound_pairing,
    wound_point_from_rational,
)

__all__ = [
    # Models
    "SolveStatus",
    "Witness",
    "SolveOutcome",
    "PlaceClassRow",
    "Constraint",
    "Refutation",
    "TelescopedChain",
    "PeriodicityCertificate",
    "WoundPoint",
    # Z/p
    "q_zp",
    "apply_qv_zp",
    "solve_qv_zp",
    "coker_class_zp",
    "x_family_zp",
    "local_class_table_zp",
    "global_preimage_search_zp",
    # Certificates
    "nonperiodicity_certificate",
    "verify_certificate",
    "verify_refutation",
    "telescoped_chain",
    # Wound group
    "q_wound",
    "x_family_wound",
    "apply_qv_wound",
    "solve_qv_wound",
    "solve_qv_wound_local",
    "unit_condition_holds",
    "verify_outcome",
    # Points
    "wound_local_point",
    "wound_point_from_rational",
    "wound_global_search",
    "verify_local_point",
    "verify_global_point",
    "wound_pairing",
]
