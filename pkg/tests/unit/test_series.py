"""
Unit tests for truncated Laurent series.

This module contains unit tests for:
- Precision bookkeeping of the ring operations
- Frobenius, p-th roots and the p-basis decomposition
- Hensel lifting (Newton iteration and the Artin-Schreier sum)
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartier_lab.algebra.gf import get_field
from cartier_lab.algebra.series import (
    EXACT,
    LaurentSeries,
    hensel_artin_schreier,
    hensel_simple_root,
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
    ls_shift,
    ls_sub,
    ls_truncate,
)
from cartier_lab.errors import (
    FieldMismatchError,
    HenselError,
    PrecisionError,
    PreconditionError,
    PthRootError,
)

F3 = get_field(3)
F9 = get_field(3, 2)


@st.composite
def series(draw, field=F3, low=(-4, 2), length=8, prec=(6, 14)):
    """A random truncated series over `field`."""
    start = draw(st.integers(*low))
    coeffs = draw(st.lists(st.integers(0, field.q - 1), min_size=length, max_size=length))
    bound = start + draw(st.integers(*prec))
    return LaurentSeries(field, start, [field.from_index(c) for c in coeffs], bound)


@st.composite
def units(draw, field=F3, prec=(4, 12)):
    """A random series of valuation 0."""
    lead = draw(st.integers(1, field.q - 1))
    rest = draw(st.lists(st.integers(0, field.q - 1), min_size=6, max_size=6))
    bound = draw(st.integers(*prec))
    return LaurentSeries(field, 0, [field.from_index(lead)] + [field.from_index(c) for c in rest], bound)


class TestConstruction:
    """Test normalization of stored coefficients."""

    def test_leading_zeros_are_stripped(self):
        x = LaurentSeries(F3, -2, [0, 0, 1, 2], 5)
        assert x.low == 0
        assert x.coeffs == (F3(1), F3(2))
        assert x.valuation() == 0

    def test_coefficients_beyond_precision_are_dropped(self):
        x = LaurentSeries(F3, 0, [1, 1, 1, 1], 2)
        assert x.coeffs == (F3(1), F3(1))

    def test_exact_zero(self):
        zero = LaurentSeries.zero(F3)
        assert zero.is_exact
        assert zero.valuation() == EXACT

    def test_inexact_zero_valuation_is_its_precision(self):
        assert LaurentSeries.zero(F3, 5).valuation() == 5

    def test_coefficient_beyond_precision(self):
        with pytest.raises(PrecisionError):
            LaurentSeries(F3, 0, [1], 3).coefficient(3)

    def test_to_text(self):
        x = LaurentSeries(F3, -1, [2, 0, 1], 4)
        assert x.to_text() == "2*u^-1 + u + O(u^4)"


class TestPrecision:
    """Test the precision rules of the ring operations."""

    def test_add_takes_minimum(self):
        x = LaurentSeries(F3, 0, [1], 5)
        y = LaurentSeries(F3, 1, [1], 3)
        assert ls_add(x, y).prec == 3

    def test_mul_rule(self):
        """Test prec = min(prec_x + val_y, prec_y + val_x)."""
        x = LaurentSeries(F3, -1, [1, 1], 4)
        y = LaurentSeries(F3, 2, [2], 6)
        assert ls_mul(x, y).prec == min(4 + 2, 6 - 1)

    def test_mul_by_exact_monomial_shifts_precision(self):
        x = LaurentSeries(F3, 0, [1, 2], 5)
        assert ls_mul(x, LaurentSeries.monomial(F3, 3)).prec == 8

    def test_inverse_rule(self):
        """Test prec = prec_x - 2 val(x)."""
        x = LaurentSeries(F3, -2, [1, 1, 2], 5)
        inverse = ls_inv(x)
        assert inverse.prec == 5 + 4
        assert inverse.valuation() == 2

    def test_inverse_of_exact_needs_cap(self):
        with pytest.raises(PrecisionError):
            ls_inv(LaurentSeries(F3, 0, [1, 1]))

    def test_inverse_of_exact_monomial_is_exact(self):
        inverse = ls_inv(LaurentSeries.monomial(F3, 2, 2))
        assert inverse == LaurentSeries.monomial(F3, -2, 2)

    def test_frobenius_and_derivative(self):
        x = LaurentSeries(F3, 1, [1, 1], 4)
        assert ls_frobenius(x).prec == 12
        assert ls_derivative(x).prec == 3

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            ls_add(LaurentSeries.constant(F3, 1), LaurentSeries.constant(F9, 1))

    @given(x=series(), y=series())
    @settings(deadline=None, max_examples=60)
    def test_product_is_commutative(self, x, y):
        assert ls_mul(x, y) == ls_mul(y, x)

    @given(x=units())
    @settings(deadline=None, max_examples=60)
    def test_inverse_of_unit(self, x):
        product = ls_mul(x, ls_inv(x))
        assert ls_is_zero_to(ls_sub(product, LaurentSeries.constant(F3, 1)), x.prec)


class TestFrobeniusStructure:
    """Test p-th roots and the p-basis."""

    @given(x=series(field=F9))
    @settings(deadline=None, max_examples=60)
    def test_pth_root_inverts_frobenius(self, x):
        assert ls_pth_root(ls_frobenius(x)) == x

    def test_pth_root_precision(self):
        x = LaurentSeries(F3, 0, [1], 7)
        assert ls_pth_root(x).prec == math.ceil(7 / 3)

    def test_pth_root_rejects(self):
        with pytest.raises(PthRootError):
            ls_pth_root(LaurentSeries.monomial(F3, 1))

    @given(x=series(field=F9))
    @settings(deadline=None, max_examples=60)
    def test_pbasis_recomposes(self, x):
        """Test x = sum_j x_j^p u^j to the precision of x."""
        parts = ls_pbasis_decompose(x)
        assert len(parts) == 3
        back = ls_pbasis_compose(parts)
        assert back.prec >= x.prec
        assert ls_is_zero_to(ls_sub(back, x), x.prec)

    def test_pbasis_component_precision(self):
        """Test component j is known to ceil((prec - j) / p)."""
        parts = ls_pbasis_decompose(LaurentSeries(F3, 0, [1], 10))
        assert [part.prec for part in parts] == [4, 3, 3]

    @given(x=series())
    @settings(deadline=None, max_examples=60)
    def test_derivative_kills_pth_powers(self, x):
        assert ls_derivative(ls_frobenius(x)).is_zero()


class TestCompose:
    """Test substitution of a uniformizer."""

    def test_identity_substitution(self):
        f = LaurentSeries(F3, -2, [1, 2, 0, 1], 6)
        assert ls_compose(f, LaurentSeries.monomial(F3, 1)) == f

    def test_requires_positive_valuation(self):
        with pytest.raises(PreconditionError):
            ls_compose(LaurentSeries.constant(F3, 1), LaurentSeries.constant(F3, 1))

    def test_pole_with_exact_substitution_needs_precision(self):
        with pytest.raises(PrecisionError):
            ls_compose(LaurentSeries.monomial(F3, -1), LaurentSeries(F3, 1, [1, 1]))


class TestHensel:
    """Test Newton iteration and the Artin-Schreier lift."""

    @given(c=series(low=(1, 3), prec=(10, 14)))
    @settings(deadline=None, max_examples=60)
    def test_artin_schreier_root(self, c):
        """Test X^p - X = c with X = 0 mod u."""
        M = 9
        X = hensel_artin_schreier(c, M)
        assert X.valuation() >= 1
        assert ls_is_zero_to(ls_sub(ls_sub(ls_frobenius(X), X), c), M)

    def test_artin_schreier_needs_positive_valuation(self):
        with pytest.raises(PreconditionError):
            hensel_artin_schreier(LaurentSeries.constant(F3, 1, 10), 5)

    def test_artin_schreier_needs_precision(self):
        with pytest.raises(PrecisionError):
            hensel_artin_schreier(LaurentSeries.monomial(F3, 1, 1, 4), 8)

    def test_simple_root_square_root(self):
        """Test the square root of 1 + u congruent to 1."""
        one = LaurentSeries.constant(F3, 1)
        F = [LaurentSeries(F3, 0, [-1, -1]), LaurentSeries.zero(F3), one]
        root = hensel_simple_root(F, one, 12)
        square = ls_mul(root, root)
        assert ls_is_zero_to(ls_sub(square, LaurentSeries(F3, 0, [1, 1])), 12)
        assert root.coefficient(0) == 1

    def test_simple_root_needs_residue_root(self):
        one = LaurentSeries.constant(F3, 1)
        F = [LaurentSeries.constant(F3, 1), LaurentSeries.zero(F3), one]  # X^2 + 1
        with pytest.raises(HenselError):
            hensel_simple_root(F, one, 5)

    def test_simple_root_needs_simple_root(self):
        one = LaurentSeries.constant(F3, 1)
        F = [LaurentSeries.zero(F3), LaurentSeries.zero(F3), one]  # X^2 at X = 0
        with pytest.raises(HenselError):
            hensel_simple_root(F, LaurentSeries.zero(F3), 5)

    def test_truncate_and_shift(self):
        x = LaurentSeries(F3, 0, [1, 1, 1], 3)
        assert ls_truncate(x, 1) == LaurentSeries(F3, 0, [1], 1)
        assert ls_shift(x, 2).prec == 5
