import json

import pytest

PAIR = "sqrt(2),sqrt(3)"


def read_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def csv_lines(path):
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def test_orbit_single_step(invoke):
    result, out = invoke("orbit", "--params", "pi/3,e/4", "--stream", "explicit:1", "--steps", "1")
    assert result.exit_code == 0, result.output
    lines = csv_lines(out / "orbit.csv")
    assert lines[0].startswith("# {")
    assert lines[1] == "i,digit,x_i"
    assert lines[2].startswith("1,1,0.04719755119")
    summary = read_json(out / "orbit_summary.json")
    assert summary["N"] == 1
    assert summary["meta"]["tool"] == "orbitlab"


def test_orbit_output_is_deterministic(invoke):
    args = ("orbit", "--params", PAIR, "--steps", "500")
    _, out = invoke(*args)
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    result, out = invoke(*args)
    assert result.exit_code == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


def test_orbit_xlsx_export(invoke):
    result, out = invoke("orbit", "--params", PAIR, "--steps", "50", "--xlsx")
    assert result.exit_code == 0, result.output
    assert (out / "orbit.xlsx").exists()


def test_unknown_option_is_a_usage_error(invoke):
    result, _ = invoke("orbit", "--params", PAIR, "--bogus")
    assert result.exit_code == 2


def test_bad_expression_is_a_usage_error(invoke):
    result, _ = invoke("orbit", "--params", "pi/", "--steps", "5")
    assert result.exit_code == 2


@pytest.mark.parametrize("spec", ["fibonacci", "periodic:1x", "recurrent:cycle", "explicit:3"])
def test_bad_stream_spec_is_a_usage_error(invoke, spec):
    result, _ = invoke("orbit", "--params", PAIR, "--stream", spec, "--steps", "5")
    assert result.exit_code == 2


def test_transcendental_parameters_get_a_warning(invoke):
    result, _ = invoke("orbit", "--params", "pi/3,e/4", "--steps", "5")
    assert result.exit_code == 0
    assert "transcendental" in result.stderr
    result, _ = invoke("orbit", "--params", PAIR, "--steps", "5")
    assert "transcendental" not in result.stderr


def test_config_file_overrides_flags(invoke, tmp_path):
    cfg = tmp_path / "run.env"
    cfg.write_text("steps=3\nstream=periodic:12\n", encoding="utf-8")
    result, out = invoke("orbit", "--params", PAIR, "--steps", "100", "--config", str(cfg))
    assert result.exit_code == 0, result.output
    rows = csv_lines(out / "orbit.csv")[2:]
    assert [r.split(",")[1] for r in rows] == ["1", "2", "1"]


def test_config_file_unknown_key(invoke, tmp_path):
    cfg = tmp_path / "run.env"
    cfg.write_text("bogus=1\n", encoding="utf-8")
    result, _ = invoke("orbit", "--params", PAIR, "--config", str(cfg))
    assert result.exit_code == 2


def test_dioph_dirichlet(invoke):
    result, out = invoke("dioph", "--params", PAIR, "--s-max", "100", "--check", "dirichlet")
    assert result.exit_code == 0, result.output
    checks = read_json(out / "dioph_checks.json")
    assert checks["valid"] is True
    assert checks["dirichlet"]["violations"] == []
    assert csv_lines(out / "dioph_table.csv")[1] == "mode,s,value,n_1,n_2"


def test_dioph_budget_exit_code(invoke):
    result, _ = invoke("dioph", "--params", PAIR, "--s-max", "20000")
    assert result.exit_code == 3


def test_cycles(invoke):
    result, out = invoke("cycles", "--params", PAIR, "--steps", "5000", "--t", "64,128", "--first-only")
    assert result.exit_code == 0, result.output
    scales = read_json(out / "cycles.json")["scales"]
    assert len(scales) == 2
    assert all(s["max_degree"] <= s["degree_bound"] == 6 for s in scales)


def test_boxdim_resolution_guard(invoke):
    result, _ = invoke("boxdim", "--params", PAIR, "--steps", "100", "--t-ladder", "8,64")
    assert result.exit_code == 3
    result, out = invoke("boxdim", "--params", PAIR, "--steps", "100", "--t-ladder", "8,64", "--force")
    assert result.exit_code == 0, result.output
    assert (out / "boxdim.csv").exists()


@pytest.mark.parametrize("expect, code", [("2,4,6,10", 0), ("2,4,6,9", 1)])
def test_complexity_expectation(invoke, expect, code):
    result, out = invoke("complexity", "--stream", "thue-morse", "--window", "4096", "--n-max", "8",
                         "--expect", expect)
    assert result.exit_code == code
    summary = read_json(out / "complexity.json")
    assert summary["matches_expected"] is (code == 0)
    assert summary["eventual_period"] is None


def test_avoidance(invoke):
    result, out = invoke("avoidance", "--eps", "0.05", "--steps", "20000")
    assert result.exit_code == 0, result.output
    run = read_json(out / "avoidance.json")["runs"][0]
    assert run["points_inside"] == 0
    assert run["central_intervals"] == 102
    assert run["central_intervals_hit"] == []


def test_avoidance_needs_two_parameters(invoke):
    result, _ = invoke("avoidance", "--params", "sqrt(2)", "--steps", "10")
    assert result.exit_code == 2


def test_returns_cross_check(invoke):
    result, out = invoke("returns", "--params", PAIR, "--stream", "recurrent:words=1;2;1 2,cycle",
                         "--depth", "6", "--cross-check")
    assert result.exit_code == 0, result.output
    summary = read_json(out / "returns.json")
    assert summary["direct_equals_closed"] is True
    assert len(csv_lines(out / "returns.csv")) == 2 + 6


def test_returns_needs_recurrent_stream(invoke):
    result, _ = invoke("returns", "--params", PAIR, "--stream", "thue-morse")
    assert result.exit_code == 1


def test_verify_exact_criteria(invoke):
    result, out = invoke("verify-all", "--quick", "--only", "degree_bound", "--only", "cf_oracle")
    assert result.exit_code == 0, result.output
    data = read_json(out / "verify.json")
    assert data["total"] == 2 and data["passed"] == 2


def test_verify_guard_bits_are_recorded(invoke):
    result, out = invoke("verify-all", "--quick", "--only", "degree_bound", "--guard-bits", "40")
    assert result.exit_code == 0, result.output
    assert read_json(out / "verify.json")["meta"]["config"]["guard_bits"] == 40
