from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_potts.errors import DivisionByZero, PrecisionExhausted
from padic_potts.padic_core import (
    PadicNumber,
    Valuation,
    as_prime,
    rational_valuation,
)

from conftest import unit_fraction


class TestPrime:
    def test_small_primes_accepted(self):
        for p in (2, 3, 5, 7, 11, 97):
            assert as_prime(p).value == p

    def test_composite_rejected(self):
        for bad in (0, 1, 4, 6, 9, 91):
            with pytest.raises(ValueError):
                as_prime(bad)


class TestValuation:
    def test_total_order_with_infinity(self):
        inf = Valuation(None)
        assert Valuation(3) < inf
        assert inf == Valuation(None)
        assert not (inf < inf)
        assert max(Valuation(-2), Valuation(5), inf) == inf

    def test_int_comparisons(self):
        assert Valuation(2) >= 2
        assert Valuation(None) >= 10**6
        assert Valuation(-1) < 0

    def test_rendering(self):
        assert str(Valuation(None)) == "+inf"
        assert str(Valuation(-3)) == "-3"


class TestFromRational:
    def test_eight_thirds_at_two(self):
        x = PadicNumber.from_rational(8, 3, 2, 10)
        assert x.norm_valuation() == 3
        assert x.norm() == Fraction(1, 8)
        # unit part is 1/3; frozen expansion from direct modular inversion
        assert x.unit_digits == (1, 1, 0, 1, 0, 1, 0, 1, 0, 1)

    def test_zero(self):
        z = PadicNumber.from_rational(0, 1, 5, 10)
        assert z.is_zero
        assert z.norm() == 0
        assert z.norm_valuation() == Valuation(None)
        assert z.unit_digits == ()

    def test_minus_one_at_three(self):
        x = PadicNumber.from_rational(-1, 1, 3, 4)
        assert x.norm_valuation() == 0
        assert x.unit_digits == (2, 2, 2, 2)
        # reassemble: 1 + (2 + 2*3 + 2*9 + 2*27) = 81
        assert (1 + sum(d * 3**i for i, d in enumerate(x.unit_digits))) % 3**4 == 0

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            PadicNumber.from_rational(1, 0, 3, 8)


class TestArithmetic:
    def test_additive_inverse_is_exact_zero(self):
        one = PadicNumber.one(3)
        assert (one + (-one)).is_zero

    def test_min_valuation_rule(self):
        a = PadicNumber.from_fraction(Fraction(3), 3, 10)
        b = PadicNumber.from_fraction(Fraction(9), 3, 10)
        assert (a + b).norm_valuation() == 1

    def test_inverse_pair(self):
        a = PadicNumber.from_fraction(Fraction(3), 3, 10)
        b = PadicNumber.from_fraction(Fraction(1, 3), 3, 10)
        prod = a * b
        assert prod == PadicNumber.one(3, 10)
        assert prod.norm_valuation() == 0

    def test_inverse_of_two_at_three(self):
        x = PadicNumber.from_rational(2, 1, 3, 5).inverse()
        assert x.unit_digits == (2, 1, 1, 1, 1)
        assert 2 * sum(d * 3**i for i, d in enumerate(x.unit_digits)) % 3**5 == 1

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            PadicNumber.one(3).div(PadicNumber.zero(3))

    def test_cancellation_raises(self):
        # (1 + 3^k) - 1 is fine; x - x for inexact x is not representable
        x = PadicNumber(Fraction(7), 3, 8, known_abs=8)
        with pytest.raises(PrecisionExhausted):
            x.sub(x)

    def test_exact_cancellation_is_zero(self):
        x = PadicNumber.from_fraction(Fraction(7, 5), 3, 8)
        assert x.sub(x).is_zero

    def test_precision_shrinks_to_min(self):
        a = PadicNumber.from_fraction(Fraction(1), 3, 20)
        b = PadicNumber.from_fraction(Fraction(3), 3, 10)
        assert (a + b).precision == 10

    def test_mixed_primes_rejected(self):
        with pytest.raises(ValueError):
            PadicNumber.one(3).add(PadicNumber.one(5))


class TestRender:
    def test_shape(self):
        x = PadicNumber.from_fraction(Fraction(12), 3, 4)
        text = x.render()
        assert text.startswith("3^1 * (")
        assert "O(3^5)" in text

    def test_zero_render(self):
        assert "0" in PadicNumber.zero(7).render()


nonzero_rationals = st.fractions(
    min_value=Fraction(-(10**6)), max_value=Fraction(10**6), max_denominator=10**4
).filter(lambda x: x != 0)


class TestOracleEquivalence:
    """PadicNumber arithmetic must agree with exact Fraction arithmetic."""

    @settings(max_examples=200, deadline=None)
    @given(x=nonzero_rationals, y=nonzero_rationals)
    def test_add_mul_match_fractions(self, x, y):
        for p in (2, 3, 5):
            a = PadicNumber.from_fraction(x, p, 24)
            b = PadicNumber.from_fraction(y, p, 24)
            if x + y != 0:
                assert (a + b) == PadicNumber.from_fraction(x + y, p, 24)
            assert (a * b) == PadicNumber.from_fraction(x * y, p, 24)
            assert (a / b) == PadicNumber.from_fraction(x / y, p, 24)

    @settings(max_examples=200, deadline=None)
    @given(x=nonzero_rationals, y=nonzero_rationals)
    def test_valuation_laws(self, x, y):
        for p in (2, 3, 5):
            vx, vy = rational_valuation(x, p), rational_valuation(y, p)
            a = PadicNumber.from_fraction(x, p, 24)
            b = PadicNumber.from_fraction(y, p, 24)
            assert (a * b).norm_valuation() == vx + vy
            if x + y != 0:
                s = (a + b).norm_valuation()
                assert s >= min(vx, vy)
                if vx != vy:
                    assert s == min(vx, vy)

    def test_strong_triangle_random(self, rng):
        for _ in range(300):
            p = rng.choice((2, 3, 5, 7))
            x = unit_fraction(rng, p) * Fraction(p) ** rng.randrange(-3, 4)
            y = unit_fraction(rng, p) * Fraction(p) ** rng.randrange(-3, 4)
            if x + y == 0:
                continue
            got = PadicNumber.from_fraction(x + y, p, 16).norm_valuation()
            assert got >= min(rational_valuation(x, p), rational_valuation(y, p))


class TestEquality:
    def test_exact_values_compare_exactly(self):
        a = PadicNumber.from_fraction(Fraction(1), 3, 6)
        b = PadicNumber.from_fraction(Fraction(1 + 3**7), 3, 6)
        assert a != b  # both exact, so the deep digit still separates them

    def test_equal_at_shared_known_bound(self):
        a = PadicNumber(Fraction(1), 3, 6, known_abs=6)
        b = PadicNumber(Fraction(1 + 3**7), 3, 6, known_abs=6)
        assert a == b  # indistinguishable below the shared absolute bound

    def test_distinguishable_values(self):
        a = PadicNumber.from_fraction(Fraction(1), 3, 6)
        b = PadicNumber.from_fraction(Fraction(1 + 3**2), 3, 6)
        assert a != b

    def test_distance_valuation(self):
        a = PadicNumber.from_fraction(Fraction(1), 3, 20)
        b = PadicNumber.from_fraction(Fraction(1 + 2 * 3**5), 3, 20)
        assert a.distance_valuation(b) == 5
