from fractions import Fraction

import pytest

from orbitlab.covering.services import (
    CoveringError, box_dim_profile, interval_index, min_cover, occupied, partition, resolution_limit,
)
from orbitlab.extensions import BudgetError
from orbitlab.numerics.fixed import FixedPoint
from orbitlab.orbit.services import OrbitService
from orbitlab.params.services import ParamService
from orbitlab.sequences.streams import PeriodicStream, ThueMorseStream


def naive_occupied(orbit, t):
    hit = set()
    for x in orbit.points:
        j = int((x.to_fraction() + Fraction(1, 2)) * t)
        hit.add(min(j, t - 1))
    return len(hit)


def test_partition():
    p = partition(4)
    assert len(p) == 4
    assert p.interval(0) == (Fraction(-1, 2), Fraction(-1, 4))
    with pytest.raises(CoveringError):
        partition(0)


def test_interval_index_edges():
    F = 16
    half = 1 << (F - 1)
    assert interval_index(FixedPoint(0, F), 4) == 2
    assert interval_index(FixedPoint(half, F), 4) == 3
    assert interval_index(FixedPoint(-half, F), 4) == 0
    assert interval_index(FixedPoint(half // 2, F), 4) == 3
    assert interval_index(FixedPoint(half // 2 - 1, F), 4) == 2


def test_occupied_matches_brute_force(pair):
    orbit = OrbitService.compute_orbit(pair, ThueMorseStream(), 500)
    for t in (8, 64, 1024):
        count, bitmap = occupied(orbit, t)
        assert count == naive_occupied(orbit, t)
        assert bitmap.sum() == count


def test_occupied_can_skip_the_start(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 1)
    assert occupied(orbit, 16)[0] == 2
    assert occupied(orbit, 16, start=1)[0] == 1


def test_min_cover_by_free_intervals():
    ps = ParamService.parameter_set(["1/10"], 32)
    orbit = OrbitService.compute_orbit(ps, PeriodicStream([1]), 3)
    assert min_cover(orbit, 4) == 2
    assert min_cover(orbit, 3) == 1


def test_min_cover_is_between_half_and_all_occupied(pair):
    orbit = OrbitService.compute_orbit(pair, ThueMorseStream(), 300)
    for t in (16, 128, 1024):
        count, _ = occupied(orbit, t)
        assert count / 2 <= min_cover(orbit, t) <= count


def test_resolution_limit():
    assert resolution_limit(10**6) == 1024
    assert resolution_limit(2 * 10**4) == 256
    assert resolution_limit(100) == 16
    assert resolution_limit(1) == 1


def test_single_rotation_slopes_are_one(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 4096)
    profile = box_dim_profile(orbit, (8, 16, 32, 64))
    assert profile.counts == (8, 16, 32, 64)
    assert profile.slopes == pytest.approx((1.0, 1.0, 1.0))
    assert profile.summary()["resolution_limit"] == 64
    assert not profile.forced


def test_resolution_guard(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 100)
    with pytest.raises(BudgetError):
        box_dim_profile(orbit, (8, 32))
    assert box_dim_profile(orbit, (8, 32), force=True).forced


def test_ladder_must_increase(sqrt2):
    orbit = OrbitService.compute_orbit(sqrt2, PeriodicStream([1]), 100)
    with pytest.raises(CoveringError):
        box_dim_profile(orbit, (8, 4))
    with pytest.raises(CoveringError):
        box_dim_profile(orbit, ())


def test_doubling_sandwich(pair, sqrt2):
    for ps, stream in ((pair, ThueMorseStream()), (sqrt2, PeriodicStream([1]))):
        orbit = OrbitService.compute_orbit(ps, stream, 3000)
        t = 2
        while t <= 4096:
            count, _ = occupied(orbit, t)
            doubled, _ = occupied(orbit, 2 * t)
            assert count <= doubled <= 2 * count
            t *= 2
