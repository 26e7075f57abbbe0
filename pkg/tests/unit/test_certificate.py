"""
Unit tests for nonperiodicity certificates.
"""

import pytest

from cartier_lab.errors import PreconditionError
from cartier_lab.obstruction.certificate import (
    WeightedUnionFind,
    difference_coefficient,
    nonperiodicity_certificate,
    periodic_constraint,
    refute_period,
    telescoped_chain,
    verify_certificate,
    verify_refutation,
)
from cartier_lab.obstruction.models import Constraint


class TestConstraints:
    """Test the recursion data of x_N - x_K at [t]."""

    def test_difference_coefficients(self):
        """Test c_m for p = 3, N = 0, K = 1: 1 at even m, 0 at odd m."""
        assert [difference_coefficient(3, 0, 1, m) for m in range(6)] == [1, 0, 1, 0, 1, 0]

    def test_periodic_constraint(self):
        constraint = periodic_constraint(3, 0, 1, 4, 3)
        assert constraint == Constraint(n=3, left=2, right=0, rhs=1)


class TestUnionFind:
    """Test the weighted union-find over F_p."""

    def test_consistent_system(self):
        uf = WeightedUnionFind(3, 3)
        assert uf.add(Constraint(n=1, left=0, right=1, rhs=1)) is None
        assert uf.add(Constraint(n=2, left=1, right=2, rhs=1)) is None
        assert uf.add(Constraint(n=3, left=0, right=2, rhs=2)) is None

    def test_conflict_returns_cycle(self):
        uf = WeightedUnionFind(3, 3)
        first = Constraint(n=1, left=0, right=1, rhs=1)
        second = Constraint(n=2, left=1, right=2, rhs=1)
        closing = Constraint(n=3, left=0, right=2, rhs=0)
        uf.add(first)
        uf.add(second)
        cycle = uf.add(closing)
        assert cycle is not None
        assert [c for c, _ in cycle] == [first, second, closing]
        assert [sign for _, sign in cycle] == [1, 1, -1]
        assert sum(sign * c.rhs for c, sign in cycle) % 3 == 2


class TestRefutation:
    """Test refutations of eventual periodicity."""

    def test_period_one(self):
        """Test P = 1, L = 0: a - a = 0 but c_0 = 1."""
        refutation = refute_period(3, 0, 1, 1, 0)
        assert refutation is not None
        assert refutation.constraints[0].n == 1
        assert refutation.constraints[0].rhs == 1
        assert verify_refutation(refutation, 3, 0, 1)

    def test_tampered_refutation_fails(self):
        refutation = refute_period(3, 0, 1, 2, 5)
        tampered = refutation.model_copy(update={"total": (refutation.total + 1) % 3})
        assert not verify_refutation(tampered, 3, 0, 1)
        assert not verify_refutation(refutation, 3, 1, 2)

    def test_refutation_above_preperiod(self):
        refutation = refute_period(3, 1, 2, 6, 20)
        assert all(c.n - 1 >= 20 for c in refutation.constraints)
        assert verify_refutation(refutation, 3, 1, 2)

    @pytest.mark.parametrize("N, K", [(0, 1), (1, 2), (0, 3)])
    def test_full_certificate(self, N, K):
        cert = nonperiodicity_certificate(3, N, K, 20, 20)
        assert cert.complete
        assert cert.inconclusive == []
        assert verify_certificate(cert)

    def test_small_window_is_inconclusive(self):
        """Test that a window too short to close a cycle is reported, not accepted."""
        cert = nonperiodicity_certificate(3, 0, 1, 3, 0, window=1)
        assert not cert.complete
        assert cert.inconclusive
        assert not verify_certificate(cert)

    def test_requires_ordered_pair(self):
        with pytest.raises(PreconditionError):
            nonperiodicity_certificate(3, 2, 1, 5, 5)

    def test_json_keys(self):
        data = nonperiodicity_certificate(3, 0, 1, 2, 2).to_json_dict()
        assert set(data) == {"p", "N", "K", "bound", "refutations", "inconclusive", "complete"}
        assert data["bound"] == {"Pmax": 2, "Lmax": 2}


class TestTelescoping:
    """Test the telescoped identity a_{M e - 1} - a_{M e p^s - 1} = s."""

    def test_chain(self):
        chain = telescoped_chain(3, 0, 1, 1, 4)
        assert chain.start == 0
        assert chain.end == 80
        assert [c.n for c in chain.constraints] == [1, 3, 9, 27]
        assert chain.total == 4 % 3

    def test_chain_with_larger_index(self):
        chain = telescoped_chain(3, 1, 2, 3, 2)
        assert chain.start == 5
        assert chain.end == 6 * 9 - 1
        assert chain.total == 2

    def test_rejects_empty_chain(self):
        with pytest.raises(PreconditionError):
            telescoped_chain(3, 0, 1, 1, 0)
