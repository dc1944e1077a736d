from pathlib import Path

import pytest

from config import config

from orbitlab.extensions import LabError
from orbitlab.orbit.services import OrbitService
from orbitlab.utils.oracles import DEFAULT_ORACLES, load_oracles
from orbitlab.verification.services import (
    VerificationService, cycling_orbit, geometric_ladder, registered_threshold,
)

REGISTERED = Path(__file__).resolve().parent.parent / "oracles" / "registered.json"


@pytest.fixture
def service(quick_cfg):
    return VerificationService(quick_cfg, dict(DEFAULT_ORACLES), seed=7)


def test_geometric_ladder():
    ladder = geometric_ladder(32, 4096)
    assert ladder[0] == 32 and ladder[-1] == 4096
    assert ladder == sorted(set(ladder))
    assert 64 in ladder and 1024 in ladder
    assert geometric_ladder(5, 5) == [5]


@pytest.mark.parametrize(
    "name",
    [
        "cycle_inequality",
        "dirichlet",
        "cf_oracle",
        "return_recursion",
        "complexity",
        "degree_bound",
        "box_below_positive",
        "golden_pairs",
        "containment",
    ],
)
def test_exact_criteria_pass(service, name):
    result = service.run("check_" + name)
    assert result["name"] == name
    assert result["passed"], result["detail"]


def test_chain_needs_the_fit(service):
    result = service.run("check_chain")
    assert not result["passed"]
    assert result["detail"] == "no exponent fit available"


def test_run_captures_lab_errors(service, monkeypatch):
    def broken():
        raise LabError("boom")

    monkeypatch.setattr(service, "check_density", broken)
    result = service.run("check_density")
    assert result == {"name": "density", "passed": False, "detail": "boom", "error": True}


def test_run_all_filters_by_name(service):
    results = service.run_all(["degree_bound", "cf_oracle"])
    assert [r["name"] for r in results] == ["cf_oracle", "degree_bound"]


def test_same_seed_same_random_pairs(quick_cfg):
    a = VerificationService(quick_cfg, DEFAULT_ORACLES, seed=3)
    b = VerificationService(quick_cfg, DEFAULT_ORACLES, seed=3)
    assert a._random_pair().mantissas == b._random_pair().mantissas


@pytest.mark.slow
@pytest.mark.parametrize("name", ["cycle_inequality", "dirichlet", "return_recursion", "degree_bound", "containment"])
def test_exact_criteria_at_full_scale(name):
    service = VerificationService(config["full"], load_oracles(REGISTERED))
    result = service.run("check_" + name)
    assert result["passed"], result["detail"]


def test_registered_value_rounding():
    assert registered_threshold(7.614e-4) == 0.00152
    assert registered_threshold(3.85e-6) == 7.7e-06


def test_registered_thresholds_are_twice_the_oracle():
    oracles = load_oracles(REGISTERED)
    gap = OrbitService.gap_stats(cycling_orbit(10**4)).max_gap
    assert oracles["density_max_gap"]["10000"] == pytest.approx(2 * float(gap), rel=1e-2)
    closest = OrbitService.min_return(cycling_orbit(4 * 10**4))
    assert oracles["min_return"]["40000"] == pytest.approx(2 * float(closest), rel=1e-2)


def test_density_criteria_against_registered_thresholds(quick_cfg):
    service = VerificationService(quick_cfg, load_oracles(REGISTERED), seed=7)
    for name in ("check_density", "check_min_return"):
        result = service.run(name)
        assert result["passed"], result["detail"]


def test_density_needs_a_registered_threshold(service):
    result = service.run("check_density")
    assert not result["passed"] and result["error"]
    assert "No registered" in result["detail"]


def test_guard_bits_raise_the_working_precision(quick_cfg):
    default = VerificationService(quick_cfg, DEFAULT_ORACLES)
    wider = VerificationService(quick_cfg, DEFAULT_ORACLES, guard_bits=quick_cfg.GUARD_BITS + 8)
    assert wider._frac_bits(10**6, 1024) == default._frac_bits(10**6, 1024) + 8


@pytest.mark.slow
def test_statistical_criteria_at_full_scale():
    service = VerificationService(config["full"], load_oracles(REGISTERED))
    names = ["density", "min_return", "avoidance", "schmidt_exponent", "single_rotation_dimension", "chain"]
    results = service.run_all(names)
    assert [r["name"] for r in results] == [
        "schmidt_exponent", "density", "min_return", "avoidance", "single_rotation_dimension", "chain",
    ]
    for r in results:
        assert r["passed"], (r["name"], r["detail"])
