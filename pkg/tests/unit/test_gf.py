"""
Unit tests for finite-field arithmetic.

This module contains unit tests for:
- FieldConfig validation and construction of F_{p^m}
- Frobenius and its inverse
- Absolute trace and the Artin-Schreier map x - x^(1/p)
- The F_p polynomial and linear-algebra helpers
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartier_lab.algebra.gf import (
    FieldConfig,
    artin_schreier_image,
    artin_schreier_solve,
    get_field,
    gcd_mod_p,
    is_irreducible_mod_p,
    mulmod_p,
    powmod_p,
    solve_mod_p,
    smallest_irreducible,
    trace_to_prime,
)
from cartier_lab.errors import (
    CharacteristicTwoError,
    FieldError,
    FieldMismatchError,
    ParseError,
    ReducibleModulusError,
)

F3 = get_field(3)
F9 = get_field(3, 2)
F27 = get_field(3, 3)
F25 = get_field(5, 2)


class TestFieldConfig:
    """Test field construction and validation."""

    def test_prime_field(self):
        """Test that F_p needs no modulus and has p elements."""
        assert F3.q == 3
        assert F3.is_prime_field
        assert len(set(F3.elements())) == 3

    def test_extension_field(self):
        """Test that F_{p^m} gets an irreducible modulus of degree m."""
        assert F9.q == 9
        assert len(F9.modulus) == 3
        assert is_irreducible_mod_p(F9.modulus, 3)
        assert len(set(F27.elements())) == 27

    def test_rejects_non_prime(self):
        """Test that p = 4 is rejected."""
        with pytest.raises(FieldError, match="not prime"):
            FieldConfig(4)

    def test_rejects_characteristic_two(self):
        """Test that p = 2 gets its own error."""
        with pytest.raises(CharacteristicTwoError):
            FieldConfig(2)

    def test_rejects_zero_degree(self):
        with pytest.raises(FieldError):
            FieldConfig(3, 0)

    def test_rejects_reducible_modulus(self):
        """Test that t^2 + 2 = (t+1)(t+2) over F_3 is refused."""
        with pytest.raises(ReducibleModulusError):
            FieldConfig(3, 2, (2, 0, 1))

    def test_errors_are_value_errors(self):
        """Test that configuration errors can be caught as ValueError."""
        with pytest.raises(ValueError):
            FieldConfig(9)

    def test_smallest_irreducible_is_deterministic(self):
        assert smallest_irreducible(3, 2) == smallest_irreducible(3, 2)
        assert get_field(3, 2) == F9


class TestFieldElement:
    """Test element arithmetic and parsing."""

    def test_integer_coercion(self):
        assert F3(5) == F3(2)
        assert F3(2) + 1 == 0

    def test_parse(self):
        """Test the 2*g+1 syntax."""
        assert F9.parse("2*g+1") == F9((1, 2))
        assert F3.parse("2") == F3(2)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ParseError):
            F9.parse("")

    def test_mixed_fields(self):
        """Test that elements of different fields do not mix."""
        with pytest.raises(FieldMismatchError):
            F9.gen() + F25.gen()

    def test_inverse(self):
        for x in F27.elements():
            if x:
                assert x * x.inverse() == 1

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            F9.zero().inverse()

    def test_index_roundtrip(self):
        for i in range(F9.q):
            assert F9.from_index(i).index() == i


class TestFrobenius:
    """Test the semilinear maps."""

    @pytest.mark.parametrize("field", [F3, F9, F27, F25])
    def test_frobenius_is_bijective(self, field):
        """Test that x -> x^p permutes F_q and frobenius_inv undoes it."""
        images = {x.frobenius() for x in field.elements()}
        assert len(images) == field.q
        for x in field.elements():
            assert x.frobenius().frobenius_inv() == x
            assert x.frobenius() == x**field.p

    @given(i=st.integers(0, 26), j=st.integers(0, 26))
    @settings(deadline=None, max_examples=50)
    def test_frobenius_is_additive_and_multiplicative(self, i, j):
        x, y = F27.from_index(i), F27.from_index(j)
        assert (x + y).frobenius() == x.frobenius() + y.frobenius()
        assert (x * y).frobenius() == x.frobenius() * y.frobenius()


class TestArtinSchreier:
    """Test trace and the map x - x^(1/p)."""

    def test_trace_of_prime_field(self):
        """Test that the trace is the identity on F_p."""
        for c in F3.elements():
            assert trace_to_prime(c) == c.to_prime()

    @pytest.mark.parametrize("field", [F3, F9, F27, F25])
    def test_fibers(self, field):
        """Test that fibers are empty or a coset of F_p, nonempty iff the trace vanishes."""
        for c in field.elements():
            solutions = artin_schreier_solve(c)
            if trace_to_prime(c) == 0:
                assert len(solutions) == field.p
                for x in solutions:
                    assert x - x.frobenius_inv() == c
            else:
                assert solutions == []

    @pytest.mark.parametrize("field", [F9, F27, F25])
    def test_linear_agrees_with_enumeration(self, field):
        for c in field.elements():
            assert artin_schreier_solve(c, method="linear") == artin_schreier_solve(c, method="enumerate")

    def test_solutions_are_sorted(self):
        for c in F9.elements():
            solutions = artin_schreier_solve(c)
            assert solutions == sorted(solutions)

    @pytest.mark.parametrize("field", [F3, F9, F27])
    def test_cokernel_has_order_p(self, field):
        """Test that F_q / im(x - x^(1/p)) has exactly p classes."""
        image = artin_schreier_image(field)
        assert field.q // len(image) == field.p
        classes = {trace_to_prime(c) for c in field.elements()}
        assert classes == set(range(field.p))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            artin_schreier_solve(F9.one(), method="magic")


class TestPrimeFieldHelpers:
    """Test the F_p polynomial and matrix helpers."""

    def test_constants_are_not_irreducible(self):
        assert not is_irreducible_mod_p([2], 3)
        assert not is_irreducible_mod_p([], 3)
        assert is_irreducible_mod_p([1, 1], 3)

    def test_mulmod(self):
        # g * g = -1 in F_3[g]/(g^2 + 1)
        assert mulmod_p([0, 1], [0, 1], [1, 0, 1], 3) == [2]

    def test_powmod(self):
        # g^3 = -g and g^9 = g in F_3[g]/(g^2 + 1)
        assert powmod_p([0, 1], 3, [1, 0, 1], 3) == [0, 2]
        assert powmod_p([0, 1], 9, [1, 0, 1], 3) == [0, 1]
        assert powmod_p([0, 1], 0, [1, 0, 1], 3) == [1]

    def test_gcd_is_monic_low_first(self):
        # (t + 1)(t + 2) and 2t + 2 share t + 1
        assert gcd_mod_p([2, 0, 1], [2, 2], 3) == [1, 1]
        assert gcd_mod_p([], [], 3) == []

    def test_solve_consistent_system(self):
        matrix = [[1, 1, 0], [0, 1, 1]]
        particular, kernel = solve_mod_p(matrix, [1, 2], 3)
        assert particular is not None
        for row, b in zip(matrix, [1, 2]):
            assert sum(a * x for a, x in zip(row, particular)) % 3 == b
        assert len(kernel) == 1
        for row in matrix:
            assert sum(a * x for a, x in zip(row, kernel[0])) % 3 == 0

    def test_solve_inconsistent_system(self):
        particular, kernel = solve_mod_p([[1, 2], [2, 4]], [1, 0], 5)
        assert particular is None
        assert len(kernel) == 1
