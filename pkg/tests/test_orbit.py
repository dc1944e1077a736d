from fractions import Fraction

import pytest

from orbitlab.numerics.fixed import FixedPoint, round_shift
from orbitlab.numerics.services import reduce_mantissa
from orbitlab.orbit.services import OrbitError, OrbitService
from orbitlab.params.services import ParamService
from orbitlab.sequences.specs import parse_stream_spec
from orbitlab.sequences.streams import PeriodicStream, RecurrentBuilder, ThueMorseStream


def naive_orbit(ps, digits):
    m = 0
    out = [0]
    for d in digits:
        m = reduce_mantissa(m + ps.mantissas[d - 1], ps.frac_bits)
        out.append(m)
    return out


def test_single_step_example():
    ps = ParamService.parameter_set(["pi/3", "e/4"], 64)
    orbit = OrbitService.compute_orbit(ps, parse_stream_spec("explicit:1", 2, 64), 1)
    assert orbit.length == 1
    assert float(orbit.point(1)) == pytest.approx(0.0471975512, abs=1e-9)


@pytest.mark.parametrize("F", [40, 64, 80])
def test_orbit_matches_naive_loop(F):
    ps = ParamService.parameter_set(["sqrt(2)", "sqrt(3)"], F)
    orbit = OrbitService.compute_orbit(ps, ThueMorseStream(), 3000)
    assert list(orbit.mantissas) == naive_orbit(ps, ThueMorseStream().prefix(3000))


def test_orbit_rejects_foreign_digits(pair):
    with pytest.raises(OrbitError):
        OrbitService.compute_orbit(pair, PeriodicStream([3]), 5)


def test_segment_translation_is_exact(pair):
    orbit = OrbitService.compute_orbit(pair, ThueMorseStream(), 2000)
    for i, j in [(0, 10), (17, 300), (1000, 999), (5, 0)]:
        assert OrbitService.segment_translation_residual(orbit, i, j).mantissa == 0
    with pytest.raises(OrbitError):
        OrbitService.segment_translation_residual(orbit, 1990, 20)


def test_delta_is_difference_of_endpoints(pair):
    d = OrbitService.delta((1, 2), (2, 2, 1), pair)
    # E(b) - E(a) = alpha_2
    assert d == pair.params[1]


def test_return_points_direct_and_closed_agree(pair):
    b = RecurrentBuilder.from_words([(1,), (2,), (1, 2), (2,), (), (1, 1)])
    direct = OrbitService.return_points(b, pair, 5, "direct")
    closed = OrbitService.return_points(b, pair, 5, "closed")
    assert direct == closed
    orbit = OrbitService.compute_orbit(pair, parse_stream_spec("explicit:" + "".join(map(str, b.stage(5))), 2, 64),
                                       b.prefix_length(5))
    assert direct[2] == orbit.point(b.prefix_length(3))


def test_return_recursion_residual_is_zero(pair):
    b = RecurrentBuilder.cycling([(1,), (2,), (1, 2)])
    assert OrbitService.check_return_recursion(b, pair, 12).mantissa == 0
    assert OrbitService.check_return_recursion(b, pair, 30, "closed").mantissa == 0


def test_return_points_arguments(pair):
    b = RecurrentBuilder.from_words([(1,), (2,)])
    with pytest.raises(OrbitError):
        OrbitService.return_points(b, pair, 2)
    with pytest.raises(OrbitError):
        OrbitService.return_points(b, pair, 1, "fast")
    with pytest.raises(OrbitError):
        OrbitService.check_return_recursion(b, pair, 1)


def test_best_return_of_single_rotation(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 100)
    i, value = OrbitService.best_return(orbit)
    assert i == 70
    assert float(value) == pytest.approx(0.0050506339, abs=1e-9)


def test_three_gaps(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 2)
    gaps = OrbitService.gap_stats(orbit)
    assert gaps.distinct == 2
    assert float(gaps.max_gap) == pytest.approx(2**0.5 - 1, abs=1e-12)
    assert sum(g.mantissa for g in gaps.sorted_gaps()) == 1 << 64


def test_avoidance_keeps_out_of_the_interval():
    F = 64
    ps = ParamService.parameter_set(["pi/3", "e/4"], F)
    eps = FixedPoint.from_fraction("0.05", F)
    result = OrbitService.avoidance_orbit(*ps.params, eps, 20000)
    assert result.failures == ()
    assert all(abs(m) >= eps.mantissa for m in result.orbit.mantissas[1:])
    assert 0 < result.beta_steps < 20000
    assert result.stream.kind == "avoidance"


def test_avoidance_precondition():
    ps = ParamService.parameter_set(["pi/3", "e/4"], 64)
    with pytest.raises(OrbitError):
        OrbitService.avoidance_orbit(*ps.params, FixedPoint.from_fraction("0.2", 64), 10)


def test_central_intervals():
    assert len(OrbitService.avoidance_central_intervals(Fraction(1, 20), 1024)) == 102
    assert len(OrbitService.avoidance_central_intervals(Fraction(1, 10), 1024)) == 204
    assert OrbitService.avoidance_central_intervals(Fraction(1, 4), 4) == []
    assert OrbitService.avoidance_central_intervals(Fraction(1, 4), 8) == [3, 4]


def test_shift_containment(pair):
    report = OrbitService.shift_containment_check(ThueMorseStream(), pair, 2000, 8)
    assert report.passed
    assert report.max_deviation.mantissa == 0
    assert len(report.occurrences) >= 2
    assert report.block == tuple(ThueMorseStream().prefix(9)[1:])


def test_orbit_error_grows_at_most_linearly():
    low, high = (
        OrbitService.compute_orbit(ParamService.parameter_set(["sqrt(2)", "sqrt(3)"], F), ThueMorseStream(), 5000)
        for F in (64, 128)
    )
    one = 1 << 64
    for i in range(0, 5001, 50):
        diff = (low.mantissas[i] - round_shift(high.mantissas[i], 64)) % one
        # всеки параметър е на по-малко от 1 единица от истинския
        assert min(diff, one - diff) <= i + 1


@pytest.mark.parametrize("steps", [1, 7, 70, 99, 500, 4096])
def test_three_distances_at_larger_n(sqrt2, steps):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), steps)
    gaps = OrbitService.gap_stats(orbit)
    assert 1 <= gaps.distinct <= 3
    assert sum(g.mantissa for g in gaps.sorted_gaps()) == 1 << 64
