import itertools

import pytest

from orbitlab.dioph.services import DiophError, DiophService
from orbitlab.extensions import BudgetError
from orbitlab.models import MODE_BOX, MODE_POSITIVE, ExponentFit


def ring_dist(ps, coeffs):
    one = 1 << ps.frac_bits
    v = sum(c * a for c, a in zip(coeffs, ps.mantissas)) % one
    return min(v, one - v)


def naive_box(ps, s):
    return min(
        ring_dist(ps, n)
        for n in itertools.product(range(-s, s + 1), repeat=ps.k)
        if any(n)
    )


def naive_positive(ps, s):
    return min(
        ring_dist(ps, n)
        for n in itertools.product(range(1, s + 1), repeat=ps.k)
        if sum(n) <= s
    )


def make_fit(tau, log_c=0.0):
    return ExponentFit(tau=tau, log_c=log_c, residual=0.0, s_min=1, s_max=2, rungs=4)


def test_box_table_matches_brute_force(pair):
    tbl = DiophService.table(pair, range(1, 13), MODE_BOX)
    for rec in tbl.records:
        assert rec.value.mantissa == naive_box(pair, rec.s)
        assert ring_dist(pair, rec.argmin) == rec.value.mantissa
        assert max(abs(n) for n in rec.argmin) <= rec.s


def test_positive_table_matches_brute_force(pair):
    tbl = DiophService.table(pair, range(2, 13), MODE_POSITIVE)
    for rec in tbl.records:
        assert rec.value.mantissa == naive_positive(pair, rec.s)
        assert all(n >= 1 for n in rec.argmin) and sum(rec.argmin) <= rec.s


def test_phi_at_one(pair):
    rec = DiophService.phi(pair, 1)
    assert rec.argmin == (1, 1)
    assert float(rec.value) == pytest.approx(0.1462643699, abs=1e-10)


def test_single_parameter_table(sqrt2):
    assert DiophService.phi(sqrt2, 4).argmin == (2,)
    rec = DiophService.phi(sqrt2, 5)
    assert rec.argmin == (5,)
    assert float(rec.value) == pytest.approx(5 * 2**0.5 - 7, abs=1e-12)


def test_continued_fraction_oracle(sqrt2):
    alpha = sqrt2.params[0]
    assert DiophService.convergent_denominators(alpha, 100) == [1, 2, 5, 12, 29, 70]
    tbl = DiophService.table(sqrt2, range(1, 301), MODE_BOX)
    for rec in tbl.records:
        cf = DiophService.cf_phi(alpha, rec.s)
        assert (cf.value, cf.argmin) == (rec.value, rec.argmin)


def test_dirichlet_bound_holds(pair):
    tbl = DiophService.table(pair, range(1, 101), MODE_BOX)
    assert tbl.valid
    assert DiophService.dirichlet_check(tbl) == []


def test_dirichlet_needs_box_table(pair):
    tbl = DiophService.table(pair, [5], MODE_POSITIVE)
    with pytest.raises(DiophError):
        DiophService.dirichlet_check(tbl)


def test_box_minimum_never_exceeds_positive_one(pair):
    ladder = range(2, 61)
    box = DiophService.table(pair, ladder, MODE_BOX)
    pos = DiophService.table(pair, ladder, MODE_POSITIVE)
    assert all(box.record(s).value <= pos.record(s).value for s in ladder)


def test_minima_are_non_increasing(pair):
    tbl = DiophService.table(pair, range(1, 80), MODE_BOX)
    values = [rec.value for rec in tbl.records]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_positive_mode_needs_s_at_least_k(pair):
    with pytest.raises(DiophError):
        DiophService.phi_positive(pair, 1)
    with pytest.raises(DiophError):
        DiophService.table(pair, [1, 5], MODE_POSITIVE)


def test_enumeration_budget(pair):
    with pytest.raises(BudgetError):
        DiophService.table(pair, [5000], MODE_BOX, budget=1000)
    with pytest.raises(DiophError):
        DiophService.table(pair, [0, 3])


def test_schmidt_scan_entries_are_exact(pair):
    scan = DiophService.schmidt_violation_scan(pair, "1", 30)
    assert scan.entries
    for q, value in scan.entries:
        assert q[0] > 0 and all(q)
        P = abs(q[0] * q[1])
        assert value.mantissa * P**2 <= 1 << 64
    larger = DiophService.schmidt_violation_scan(pair, "1", 60)
    new = DiophService.compare_scans(scan, larger)
    assert set(new) <= larger.tuples
    assert not set(new) & scan.tuples


def test_schmidt_scan_preconditions(pair, sqrt2):
    with pytest.raises(DiophError):
        DiophService.schmidt_violation_scan(sqrt2, "1", 10)
    with pytest.raises(DiophError):
        DiophService.schmidt_violation_scan(pair, "1", 10, algebraic=False)
    with pytest.raises(DiophError):
        DiophService.schmidt_violation_scan(pair, "0", 10)


def test_exponent_fit_of_a_pair(pair):
    tbl = DiophService.table(pair, [16, 32, 64, 128, 256], MODE_BOX)
    fit = DiophService.exponent_fit(tbl, 16, 256)
    assert fit.rungs == 5
    assert 0.5 < fit.tau < 4
    with pytest.raises(DiophError):
        DiophService.exponent_fit(tbl, 16, 64)


def test_predicted_min_cover():
    assert DiophService.predicted_min_cover(1024, make_fit(2.0)) == 23
    assert DiophService.predicted_min_cover(1024, make_fit(0.1)) == 1024
    assert DiophService.predicted_min_cover(1024, make_fit(-1.0)) == 1024
    assert DiophService.predicted_min_cover(4, make_fit(2.0, log_c=-20)) == 1
    assert DiophService.predicted_dimension(make_fit(2.0)) == 0.5
    with pytest.raises(DiophError):
        DiophService.predicted_dimension(make_fit(0.0))


def test_golden_pairs(pair, sqrt2):
    pairs = DiophService.golden_pair_scan(pair, 1.0, 200)
    assert len(pairs) >= 5
    assert pairs[0][:2] == (1, 1)
    with pytest.raises(DiophError):
        DiophService.golden_pair_scan(sqrt2, 1.0, 10)
