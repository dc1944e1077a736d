import random
from fractions import Fraction

import pytest

from orbitlab.numerics.constants import eval_const
from orbitlab.numerics.fixed import CirclePoint, FixedPoint, NumericsError, PrecisionBudget, round_shift
from orbitlab.numerics.services import (
    ceil_log2, circle_add, circle_sub, dist_to_zero, precision_budget, reduce, reduce_mantissa,
)


def test_round_shift_rounds_to_nearest():
    assert round_shift(5, 1) == 3
    assert round_shift(4, 1) == 2
    assert round_shift(-5, 1) == -2
    assert round_shift(3, -2) == 12


def test_from_fraction_is_exact_for_dyadics():
    assert FixedPoint.from_fraction("1/2", 4).mantissa == 8
    assert FixedPoint.from_fraction(Fraction(-3, 8), 4).mantissa == -6
    assert FixedPoint.from_int(3, 4).mantissa == 48


def test_mixed_precision_is_an_error():
    with pytest.raises(NumericsError):
        FixedPoint(1, 4) + FixedPoint(1, 5)
    with pytest.raises(NumericsError):
        FixedPoint(1, 4) < FixedPoint(1, 5)


def test_integer_multiplication():
    assert FixedPoint(3, 4) * 2 == FixedPoint(6, 4)
    assert 2 * FixedPoint(3, 4) == FixedPoint(6, 4)


def test_rescale_widens_exactly():
    x = FixedPoint(3, 4)
    assert x.rescale(8) == FixedPoint(48, 8)
    assert x.rescale(8).rescale(4) == x


def test_reduce_keeps_half_on_the_positive_side():
    assert reduce_mantissa(8, 4) == 8
    assert reduce_mantissa(-8, 4) == 8
    assert reduce_mantissa(9, 4) == -7
    assert reduce_mantissa(40, 4) == 8
    assert reduce_mantissa(-17, 4) == -1


def test_circle_point_range():
    CirclePoint(8, 4)
    with pytest.raises(NumericsError):
        CirclePoint(-8, 4)


def test_circle_arithmetic():
    a, b = FixedPoint(6, 4), FixedPoint(5, 4)
    assert circle_add(a, b) == CirclePoint(-5, 4)
    assert circle_sub(b, a) == CirclePoint(-1, 4)
    assert reduce(FixedPoint(25, 4)) == CirclePoint(-7, 4)


def test_dist_to_zero():
    assert dist_to_zero(FixedPoint(9, 4)) == FixedPoint(7, 4)
    assert dist_to_zero(FixedPoint(-3, 4)) == FixedPoint(3, 4)
    assert dist_to_zero(FixedPoint(32, 4)) == FixedPoint(0, 4)


def test_ceil_log2():
    assert [ceil_log2(n) for n in (1, 2, 3, 1024, 1025)] == [0, 1, 2, 10, 11]


def test_precision_budget():
    assert precision_budget(10**6, 1024, 32) == 62
    assert precision_budget(1, 1, 0) == 0
    assert PrecisionBudget(10**6, 1024).working_bits() == 64
    assert PrecisionBudget(2**40, 2**20).working_bits() == 92
    with pytest.raises(NumericsError):
        precision_budget(0, 4)


def test_constants_are_correctly_rounded():
    assert eval_const("sqrt(2)", 16).mantissa == 92682
    assert eval_const("pi", 30).mantissa == 3373259426
    assert eval_const("e", 30).mantissa == 2918732889
    assert eval_const("phi", 16).mantissa == 106039


def test_perfect_square_refused():
    with pytest.raises(NumericsError):
        eval_const("sqrt(4)", 16)
    assert eval_const("sqrt(4)", 16, allow_square=True).mantissa == 2 << 16


def test_constants_need_some_precision():
    with pytest.raises(NumericsError):
        eval_const("pi", 4)
    with pytest.raises(NumericsError):
        eval_const("tau", 32)


def test_decimal_rendering():
    assert FixedPoint(1, 1).to_decimal() == "0.5"
    assert FixedPoint(-1, 2).to_decimal() == "-0.25"
    assert str(FixedPoint(3, 2)) == "0.75"


def random_points(rng, n, F=64):
    half = 1 << (F - 1)
    return [reduce(FixedPoint(rng.randrange(-half + 1, half + 1), F)) for _ in range(n)]


def test_circle_add_is_associative_and_commutative():
    rng = random.Random(3)
    for _ in range(500):
        x, y, z = random_points(rng, 3)
        assert circle_add(circle_add(x, y), z) == circle_add(x, circle_add(y, z))
        assert circle_add(x, y) == circle_add(y, x)


def test_circle_distance_is_symmetric():
    rng = random.Random(4)
    for _ in range(500):
        x, y = random_points(rng, 2)
        assert dist_to_zero(circle_sub(x, y)) == dist_to_zero(circle_sub(y, x))
        assert dist_to_zero(circle_sub(x, x)).mantissa == 0
    half = FixedPoint(1 << 63, 64)
    assert dist_to_zero(circle_sub(half, FixedPoint(0, 64))) == dist_to_zero(circle_sub(FixedPoint(0, 64), half))


def test_pi_to_eighteen_places():
    assert eval_const("pi", 64).to_decimal(19) == "3.141592653589793238"
    assert eval_const("e", 64).to_decimal(19) == "2.718281828459045235"
