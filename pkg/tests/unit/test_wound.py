"""
Unit tests for the wound group t x^p = y^p - y.

This module contains unit tests for:
- The global map q(eta) = (C(t eta), eta - C(eta)) and the x_N family
- The local solver at [t], at infinity and at other finite places
- Re-verification of outcomes
"""

import pytest

from cartier_lab.algebra.cartier import Differential, DifferentialPair, localize_pair
from cartier_lab.algebra.gf import get_field
from cartier_lab.algebra.ratfield import (
    Place,
    RationalFunction,
    embed_t,
    parse_place,
    parse_rational,
)
from cartier_lab.algebra.series import LaurentSeries
from cartier_lab.errors import PreconditionError, UnsupportedTargetError
from cartier_lab.obstruction import wound as wound_module
from cartier_lab.obstruction.models import SolveStatus
from cartier_lab.obstruction.wound import (
    pbasis_of_t,
    q_wound,
    solve_qv_wound,
    solve_qv_wound_local,
    unit_condition_holds,
    verify_outcome,
    working_precision,
    x_family_wound,
)
from cartier_lab.obstruction.zp import q_zp

F3 = get_field(3)


@pytest.fixture
def t_place():
    return parse_place(F3, "t")


class TestGlobalMap:
    """Test q_wound and the family x_N = (t^-N dt, 0)."""

    def test_q_of_t_dt(self):
        """Test q(t dt) = (dt, t dt): C(t^2 dt) = dt and C(t dt) = 0."""
        t = RationalFunction.t(F3)
        pair = q_wound(Differential(t))
        assert pair.first.coeff == RationalFunction.constant(F3, 1)
        assert pair.second.coeff == t

    def test_second_component_is_zp_map(self):
        eta = parse_rational(F3, "(t+1)/(t^2+2)")
        assert q_wound(Differential(eta)).second == q_zp(eta)

    def test_rejects_local(self):
        with pytest.raises(PreconditionError):
            q_wound(Differential(LaurentSeries.monomial(F3, 1)))

    def test_family(self):
        pair = x_family_wound(F3, 2)
        assert pair.first.coeff == parse_rational(F3, "1/t^2")
        assert pair.second.is_zero()

    def test_family_at_infinity(self):
        """Test t^-N dt = -u^(N-2) du with t = 1/u."""
        e = embed_t(Place.infinity(F3), 10)
        local = localize_pair(x_family_wound(F3, 3), e, 10)
        assert local.first.coeff == LaurentSeries(F3, 1, [-1], 10)

    @pytest.mark.parametrize("N", [0, -1])
    def test_family_needs_positive_index(self, N):
        with pytest.raises(PreconditionError):
            x_family_wound(F3, N)


class TestSolveAtT:
    """Test the obstruction at [t]."""

    def test_difference_is_refuted(self, t_place):
        """Test x_1 - x_2: the u^-2 coefficient of the first component is 2 but forced to 0."""
        target = x_family_wound(F3, 1) - x_family_wound(F3, 2)
        outcome = solve_qv_wound(target, t_place, 10)
        assert outcome.status == SolveStatus.NO_SOLUTION
        assert outcome.witness.kind == "negative_coefficient"
        assert outcome.witness.exponent == -2
        assert outcome.witness.value == "2"
        assert outcome.witness.forced == "0"
        assert outcome.verified

        local = localize_pair(target, embed_t(t_place, 12), 12)
        assert verify_outcome(outcome, local)

    def test_single_member_is_refuted(self, t_place):
        outcome = solve_qv_wound(x_family_wound(F3, 1), t_place, 10)
        assert not outcome.solved
        assert outcome.witness.exponent == -1

    def test_global_image_is_solved(self, t_place):
        """Test that q of a global eta integral at [t] is solvable there."""
        target = q_wound(Differential(parse_rational(F3, "1/(t+1)")))
        outcome = solve_qv_wound(target, t_place, 10)
        assert outcome.solved
        assert outcome.verified

    def test_tampered_witness_fails(self, t_place):
        target = x_family_wound(F3, 1) - x_family_wound(F3, 2)
        outcome = solve_qv_wound(target, t_place, 10)
        tampered = outcome.model_copy(
            update={"witness": outcome.witness.model_copy(update={"exponent": -1})}
        )
        local = localize_pair(target, embed_t(t_place, 12), 12)
        assert not verify_outcome(tampered, local)

    def test_corrupted_witness_is_reported_unverified(self, t_place, monkeypatch):
        """Test that a refutation is re-derived from the target rather than trusted."""
        solve_at_t = wound_module._solve_at_t

        def corrupted(*args):
            outcome = solve_at_t(*args)
            return outcome.model_copy(
                update={"witness": outcome.witness.model_copy(update={"value": "corrupt"})}
            )

        monkeypatch.setattr(wound_module, "_solve_at_t", corrupted)
        outcome = solve_qv_wound(x_family_wound(F3, 1), t_place, 10)
        assert outcome.status == SolveStatus.NO_SOLUTION
        assert not outcome.verified


class TestSolveAwayFromT:
    """Test local solvability of x_N at places other than [t]."""

    def test_infinity(self):
        """Test a_0 = 2 in the ansatz for x_1 at 1/t."""
        outcome = solve_qv_wound(x_family_wound(F3, 1), Place.infinity(F3), 12)
        assert outcome.solved
        assert outcome.verified
        assert outcome.solution.coefficient(0) == 2

    @pytest.mark.parametrize("text", ["1/t", "t+1", "t+2", "t^2+1"])
    @pytest.mark.parametrize("N", [1, 2])
    def test_solved_and_verified(self, text, N):
        outcome = solve_qv_wound(x_family_wound(F3, N), parse_place(F3, text), 12)
        assert outcome.status == SolveStatus.SOLVED
        assert outcome.verified
        assert outcome.place == text

    def test_local_solution_reproduces_target(self):
        place = parse_place(F3, "t+2")
        e = embed_t(place, working_precision(3, 12))
        local = localize_pair(x_family_wound(F3, 1), e, 14)
        outcome = solve_qv_wound_local(local, e, 12)
        assert verify_outcome(outcome, local, e)

    @pytest.mark.parametrize("text", ["t+1", "t+2", "t^2+1", "t^2+t+2"])
    def test_unit_condition(self, text):
        assert unit_condition_holds(embed_t(parse_place(F3, text), 12))

    def test_pbasis_at_t_minus_one(self):
        """Test T = 1 + u: t_0 = 1, t_1 = 1, t_2 = 0."""
        t0, t1, t2 = pbasis_of_t(embed_t(parse_place(F3, "t+2"), 10))
        assert t0.coefficient(0) == 1
        assert t1.coefficient(0) == 1
        assert t2.is_zero()

    def test_second_component_unsupported(self):
        target = DifferentialPair(
            Differential(RationalFunction.zero(F3)),
            Differential(parse_rational(F3, "1/t")),
        )
        with pytest.raises(UnsupportedTargetError):
            solve_qv_wound(target, Place.infinity(F3), 8)

    def test_needs_global_target(self):
        local = DifferentialPair(
            Differential(LaurentSeries.zero(F3)), Differential(LaurentSeries.zero(F3))
        )
        with pytest.raises(PreconditionError):
            solve_qv_wound(local, Place.infinity(F3), 8)

    def test_local_target_needs_precision(self, t_place):
        e = embed_t(t_place, 20)
        short = localize_pair(x_family_wound(F3, 1), e, 4)
        with pytest.raises(PreconditionError):
            solve_qv_wound_local(short, e, 8)
