"""
Unit tests for F_q(t), its places and local embeddings.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartier_lab.algebra.gf import get_field
from cartier_lab.algebra.poly import Polynomial, monic_irreducibles
from cartier_lab.algebra.ratfield import (
    Place,
    RationalFunction,
    detect_eventual_period,
    embed_t,
    parse_place,
    parse_rational,
    places_up_to_degree,
    rational_from_periodic,
    rf_expand_at,
    rf_is_pth_power,
    rf_valuation,
)
from cartier_lab.algebra.series import (
    LaurentSeries,
    ls_is_zero_to,
    ls_mul,
    ls_sub,
    ls_substitute_polynomial,
)
from cartier_lab.errors import ParseError, PeriodError, PreconditionError

F3 = get_field(3)
F9 = get_field(3, 2)

small_polys = st.lists(st.integers(0, 2), min_size=1, max_size=4).map(lambda c: Polynomial(F3, c))


def _rational(num: str, den: str = "1") -> RationalFunction:
    return RationalFunction(Polynomial.parse(F3, num), Polynomial.parse(F3, den))


class TestRationalFunction:
    """Test normalization and arithmetic."""

    def test_reduces_and_makes_denominator_monic(self):
        f = _rational("2*t^2+2*t", "2*t")
        assert f == _rational("t+1")
        assert f.den.is_monic()

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(Polynomial.one(F3), Polynomial.zero(F3))

    def test_parse(self):
        f = parse_rational(F3, "(t+1)/(t^2+1)")
        assert f.num == Polynomial.parse(F3, "t+1")
        assert f.den == Polynomial.parse(F3, "t^2+1")
        assert str(parse_rational(F3, "1/t")) == "1/t"

    def test_parse_rejects_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_rational(F3, "1/0")

    def test_height(self):
        assert parse_rational(F3, "t/(t^3+1)").height() == 3
        assert RationalFunction.zero(F3).height() == 0

    def test_valuation(self):
        f = parse_rational(F3, "t^2/(t+1)")
        assert rf_valuation(f, parse_place(F3, "t")) == 2
        assert rf_valuation(f, parse_place(F3, "t+1")) == -1
        assert rf_valuation(f, parse_place(F3, "1/t")) == -1

    def test_pth_power_detection(self):
        f = parse_rational(F3, "t^3/(t^3+1)")
        assert rf_is_pth_power(f) == parse_rational(F3, "t/(t+1)")
        assert rf_is_pth_power(parse_rational(F3, "t")) is None

    @given(a=small_polys, b=small_polys.filter(lambda f: not f.is_zero()))
    @settings(deadline=None, max_examples=40)
    def test_derivative_of_pth_power_vanishes(self, a, b):
        f = RationalFunction(a, b)
        assert f.frobenius().derivative().is_zero()


class TestPlaces:
    """Test place parsing and enumeration."""

    def test_parse_infinity(self):
        assert parse_place(F3, "1/t").is_infinity
        assert str(parse_place(F3, "1/t")) == "1/t"

    def test_parse_rejects_reducible(self):
        with pytest.raises(ParseError):
            parse_place(F3, "t^2+2")

    def test_parse_rejects_non_monic(self):
        with pytest.raises(ParseError):
            parse_place(F3, "2*t+1")

    def test_place_order(self):
        """Test degree first, then finite before infinity."""
        places = places_up_to_degree(F3, 2)
        assert [str(p) for p in places] == ["t", "t+1", "t+2", "1/t", "t^2+1", "t^2+t+2", "t^2+2*t+2"]

    def test_degree(self):
        assert parse_place(F3, "t^2+1").degree == 2
        assert Place.infinity(F3).degree == 1


class TestEmbedding:
    """Test the expansion of t at a place."""

    def test_degree_one_places_are_exact(self):
        e = embed_t(parse_place(F3, "t+1"), 10)
        assert e.is_exact
        assert e.t_image == LaurentSeries(F3, 0, [2, 1])

    def test_infinity(self):
        e = embed_t(Place.infinity(F3), 10)
        assert e.t_image == LaurentSeries.monomial(F3, -1)
        assert e.dtdu == LaurentSeries.monomial(F3, -2, -1)

    def test_degree_two_place(self):
        """Test pi(T) = u at t^2 + 1 over the residue field F_9."""
        place = parse_place(F3, "t^2+1")
        e = embed_t(place, 12)
        assert e.residue_field.q == 9
        value = ls_substitute_polynomial(place.poly, e.t_image, 12)
        assert ls_is_zero_to(ls_sub(value, LaurentSeries.monomial(e.residue_field, 1)), 12)

    def test_degree_two_needs_prime_field(self):
        place = Place.finite(monic_irreducibles(F9, 2)[0])
        with pytest.raises(PreconditionError):
            embed_t(place, 5)

    def test_expansion_is_multiplicative(self):
        """Test (fg)_v = f_v g_v at t+1."""
        e = embed_t(parse_place(F3, "t+1"), 12)
        f = parse_rational(F3, "1/(t^2+1)")
        g = parse_rational(F3, "(t+2)/t")
        product = rf_expand_at(f * g, e, 10)
        separate = ls_mul(rf_expand_at(f, e, 10), rf_expand_at(g, e, 10))
        assert ls_is_zero_to(ls_sub(product, separate), 10)

    def test_expansion_of_pole(self):
        e = embed_t(parse_place(F3, "t"), 10)
        x = rf_expand_at(parse_rational(F3, "1/(t-t^2)"), e, 6)
        assert x.valuation() == -1
        assert x.prec == 6
        assert all(x.coefficient(k) == 1 for k in range(-1, 6))


class TestPeriodicity:
    """Test eventual periodicity and reconstruction at [t]."""

    def test_detect(self):
        coeffs = [2, 2] + [1, 2, 0] * 10
        assert detect_eventual_period(coeffs, 5, 5) == (2, 3)

    def test_detect_none(self):
        coeffs = [1 if k in (1, 3, 7, 15) else 0 for k in range(20)]
        assert detect_eventual_period(coeffs, 2, 2) is None

    def test_detect_needs_long_prefix(self):
        with pytest.raises(PeriodError):
            detect_eventual_period([1, 2, 3], 5, 5)

    def test_reconstruction_expands_back(self):
        e = embed_t(parse_place(F3, "t"), 30)
        prefix = [2, 2] + [1, 2, 0] * 8
        f = rational_from_periodic(prefix, 2, 3, e)
        expansion = rf_expand_at(f, e, len(prefix))
        assert [expansion.coefficient(k) for k in range(len(prefix))] == [F3(c) for c in prefix]

    def test_reconstruction_only_at_t(self):
        with pytest.raises(PreconditionError):
            rational_from_periodic([1, 1], 0, 1, embed_t(parse_place(F3, "t+1"), 5))

    def test_reconstruction_rejects_inconsistent_prefix(self):
        e = embed_t(parse_place(F3, "t"), 5)
        with pytest.raises(PeriodError):
            rational_from_periodic([1, 2, 1, 1], 0, 2, e)
