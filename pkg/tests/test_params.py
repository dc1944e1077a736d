import pytest

from orbitlab.numerics.fixed import round_shift
from orbitlab.params.parser import (
    BinOp, Const, Number, ParamError, Sqrt, constants_used, parse_param, split_params, to_text,
)
from orbitlab.params.services import ParamService, eval_param
from orbitlab.params.validators import validate_param_texts, validate_screen_args


def test_parse_precedence():
    assert parse_param("pi/3") == BinOp("/", Const("pi"), Number("3"))
    assert parse_param("1+2*e") == BinOp("+", Number("1"), BinOp("*", Number("2"), Const("e")))
    assert parse_param("sqrt(2)") == Sqrt(Number("2"))


def test_unicode_operators_are_accepted():
    assert parse_param("pi−1") == parse_param("pi-1")
    assert parse_param("2×e") == parse_param("2*e")


@pytest.mark.parametrize(
    "text, offset",
    [
        ("pi/", 3),
        ("sqrt(2", 6),
        ("pi $ 3", 3),
        ("2×π", 3),
        ("foo", 0),
    ],
)
def test_syntax_errors_carry_byte_offset(text, offset):
    with pytest.raises(ParamError) as exc:
        parse_param(text)
    assert exc.value.offset == offset


def test_eval_param():
    assert eval_param(parse_param("1/2"), 16).mantissa == 32768
    assert eval_param(parse_param("sqrt(2)"), 16).mantissa == 92682
    assert eval_param(parse_param("pi/3"), 30).mantissa == 1124419809
    assert eval_param(parse_param("e/4"), 30).mantissa == 729683222


def test_eval_errors():
    with pytest.raises(ParamError):
        eval_param(parse_param("1/(2-2)"), 16)
    with pytest.raises(ParamError):
        eval_param(parse_param("sqrt(0-2)"), 16)


def test_split_params():
    assert split_params("pi/3, e/4") == ["pi/3", "e/4"]


def test_parameter_set_reduces_to_the_circle():
    ps = ParamService.parameter_set(["pi/3", "e/4"], 30)
    assert ps.k == 2
    assert ps.mantissas == (1124419809 - 2**30, 729683222 - 2**30)
    assert ps.raw[0].mantissa == 1124419809
    assert ps.source_exprs == ("pi/3", "e/4")


def test_coinciding_parameters_rejected():
    with pytest.raises(ParamError):
        ParamService.parameter_set(["sqrt(2)", "sqrt(2)+1"], 64)


def test_validators():
    assert validate_param_texts(["pi"]) == []
    assert validate_param_texts([])
    assert validate_param_texts(["pi"] * 9)
    assert validate_param_texts(["", "pi"]) == ["Parameter 1: empty expression."]
    assert validate_screen_args(20, 2) == []
    assert validate_screen_args(20, 5)
    assert validate_screen_args(0, 1)


def test_independence_screen_finds_a_relation():
    ps = ParamService.parameter_set(["sqrt(2)", "sqrt(8)"], 64)
    assert (0, 2, -1) in ParamService.independence_screen(ps, 5)


def test_independence_screen_passes_independent_pair(pair):
    assert ParamService.independence_screen(pair, 10) == []


def test_screen_reports_rational_offsets():
    ps = ParamService.parameter_set(["sqrt(2)", "sqrt(2)+1/3"], 64)
    # 1 + 3 alpha_1 - 3 alpha_2 = 0, само знакът с положителен n_1
    assert (1, 3, -3) in ParamService.independence_screen(ps, 5)


EXPRESSIONS = [
    "pi/3", "e/4", "1+2*e", "-pi/4", "-(pi/4)", "2*(e-1)/3", "sqrt(sqrt(2)+1)", ".5*phi", "--e", "sqrt(3)-sqrt(2)",
]


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_print_parse_round_trip(text):
    ast = parse_param(text)
    assert parse_param(to_text(ast)) == ast


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_eval_agrees_across_precisions(text):
    low = eval_param(parse_param(text), 64).mantissa
    high = eval_param(parse_param(text), 128).mantissa
    assert abs(low - round_shift(high, 64)) <= 1 << 8


def test_constants_used():
    assert constants_used(parse_param("pi/3+sqrt(e)")) == {"pi", "e"}
    assert constants_used(parse_param("sqrt(2)")) == set()


def test_unverifiable_transcendentals():
    assert ParamService.unverifiable_transcendentals(["pi/3", "e/4"]) == ["pi/3", "e/4"]
    assert ParamService.unverifiable_transcendentals(["pi+e"]) == ["pi+e"]
    assert ParamService.unverifiable_transcendentals(["pi/3", "sqrt(2)"]) == []
    assert ParamService.unverifiable_transcendentals(["sqrt(2)", "phi"]) == []
