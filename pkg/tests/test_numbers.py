"""
Tests for exact rationals, quadratic irrationals and radical sums
"""
import random
from fractions import Fraction

import pytest
from mpmath import iv

from app.exceptions import DivisionByZero, IdenticallyZero, InputError, MixedRadicand
from app.models.numbers import (
    QuadNum, RadicalSum, encode_number, evaluate_quadratic, format_rational, qn_arith,
    qn_cross_compare, qn_sign, quadratic_roots, squarefree_decompose, to_rational
)


def sqrt(n):
    return QuadNum.sqrt(n)


# ==================== Rationals ====================

def test_to_rational_accepts_strings_and_ints():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(-4) == Fraction(-4)
    assert to_rational(" 7 ") == Fraction(7)


@pytest.mark.parametrize('bad', ["abc", "1/0", True, 0.5, None])
def test_to_rational_rejects_inexact_values(bad):
    with pytest.raises(InputError):
        to_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(6, 3)) == "2"


def test_squarefree_decompose():
    assert squarefree_decompose(72) == (6, 2)
    assert squarefree_decompose(7) == (1, 7)


# ==================== QuadNum ====================

def test_canonical_form_extracts_squares():
    assert QuadNum(0, 1, 8) == QuadNum(0, 2, 2)
    assert QuadNum(0, 1, 8).d == 2
    assert QuadNum(1, 3, 4) == QuadNum(7)
    assert QuadNum(5, 0, 3).d == 0


def test_sqrt_of_rational():
    assert sqrt(Fraction(7, 4)) == QuadNum(0, Fraction(1, 2), 7)
    assert sqrt(9) == QuadNum(3)
    assert sqrt(0) == QuadNum(0)


def test_arithmetic_in_one_field():
    x = QuadNum(1, 1, 2)
    y = QuadNum(1, -1, 2)
    assert x * y == QuadNum(-1)
    assert x + y == QuadNum(2)
    assert x / y == QuadNum(-3, -2, 2)
    assert qn_arith(x, y, '-') == QuadNum(0, 2, 2)


def test_mixed_radicands_raise():
    with pytest.raises(MixedRadicand):
        sqrt(2) + sqrt(3)
    with pytest.raises(MixedRadicand):
        qn_arith(sqrt(2), sqrt(3), '*')


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        QuadNum(1, 1, 2) / QuadNum(0)
    with pytest.raises(ZeroDivisionError):
        QuadNum(1) / 0


def test_sign_cases():
    assert qn_sign(QuadNum(4, -1, 7)) == 1
    assert qn_sign(QuadNum(2, -1, 7)) == -1
    assert qn_sign(QuadNum(-3, 2, 2)) == -1
    assert qn_sign(QuadNum(-2, 2, 2)) == 1
    assert qn_sign(QuadNum(0)) == 0


def test_cross_compare_between_fields():
    assert qn_cross_compare(sqrt(2), sqrt(3)) == -1
    assert qn_cross_compare(QuadNum(1, 1, 2), QuadNum(0, 1, 5)) == 1
    assert qn_cross_compare(QuadNum(0, 2, 2), sqrt(8)) == 0
    assert sqrt(3) > sqrt(2)


def test_sign_matches_interval_arithmetic():
    rng = random.Random(7)
    iv.prec = 100
    checked = 0
    for _ in range(1000):
        q = QuadNum(
            Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
            Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
            rng.choice([2, 3, 5, 6, 7, 11, 15])
        )
        value = iv.mpf(q.a.numerator) / q.a.denominator
        if q.d:
            value += iv.mpf(q.b.numerator) / q.b.denominator * iv.sqrt(iv.mpf(q.d))
        if value.a > 0:
            assert q.sign() == 1
            checked += 1
        elif value.b < 0:
            assert q.sign() == -1
            checked += 1
    assert checked > 900


def test_json_round_trip_forms():
    q = QuadNum(Fraction(1, 2), Fraction(-3, 4), 5)
    assert q.to_json() == {'a': '1/2', 'b': '-3/4', 'd': 5}
    assert QuadNum.from_json(q.to_json()) == q
    assert encode_number(QuadNum(Fraction(5, 2))) == "5/2"
    assert QuadNum.from_json("5/2") == QuadNum(Fraction(5, 2))


def test_from_json_missing_keys():
    with pytest.raises(InputError):
        QuadNum.from_json({'a': '1', 'b': '1'})


# ==================== Quadratics ====================

def test_k3_quadratic_roots():
    roots = quadratic_roots(8, -16, 4)
    assert roots == [QuadNum(1, Fraction(-1, 2), 2), QuadNum(1, Fraction(1, 2), 2)]
    for root in roots:
        assert evaluate_quadratic(8, -16, 4, root) == 0


def test_degenerate_quadratics():
    assert quadratic_roots(0, 2, -3) == [QuadNum(Fraction(3, 2))]
    assert quadratic_roots(1, 0, 1) == []
    assert quadratic_roots(1, -2, 1) == [QuadNum(1)]
    assert quadratic_roots(0, 0, 5) == []
    with pytest.raises(IdenticallyZero):
        quadratic_roots(0, 0, 0)


# ==================== RadicalSum ====================

def test_radical_sum_sign():
    close = RadicalSum({2: 1, 3: 1}) - RadicalSum({10: 1})
    assert close.sign() == -1
    assert (RadicalSum({2: 1}) * RadicalSum({2: 1})).terms == {1: Fraction(2)}
    assert RadicalSum({6: 1}) - RadicalSum({2: 1}) * RadicalSum({3: 1}) == RadicalSum({})


def test_fano_second_difference_is_minus_one():
    f0 = QuadNum(4) - sqrt(7)
    f1 = QuadNum(0)
    f_half = QuadNum(Fraction(5, 2)) - sqrt(Fraction(7, 4))
    second = RadicalSum.of(f0) + RadicalSum.of(f1) - RadicalSum.of(f_half) * 2
    assert second.as_quadnum() == QuadNum(-1)


def test_radical_sum_with_three_radicands():
    value = RadicalSum.of(QuadNum(1, 1, 2)) + RadicalSum.of(QuadNum(0, -1, 3)) + RadicalSum.of(QuadNum(0, 1, 5))
    expected = 1 + 2 ** 0.5 - 3 ** 0.5 + 5 ** 0.5
    assert value.sign() == 1
    assert abs(float(value) - expected) < 1e-12
    with pytest.raises(MixedRadicand):
        value.as_quadnum()
