from __future__ import annotations

import itertools
import logging
import math

from orbitlab.models import ParameterSet
from orbitlab.numerics.constants import eval_const
from orbitlab.numerics.fixed import FixedPoint, round_shift
from orbitlab.numerics.services import reduce
from orbitlab.params.parser import (
    BinOp, Const, Neg, Number, ParamError, ParamExpr, Sqrt, constants_used, parse_param, to_call,
)
from orbitlab.params.validators import validate_param_texts

logger = logging.getLogger(__name__)

TRANSCENDENTAL_CONSTANTS = ("pi", "e")

# всеки възел губи най-много 1 единица на работната точност
EVAL_GUARD_BITS = 16


def _div_round(num: int, den: int) -> int:
    if den < 0:
        num, den = -num, -den
    return (2 * num + den) // (2 * den)


def _eval(node: ParamExpr, work: int) -> int:
    if isinstance(node, Number):
        return FixedPoint.from_fraction(node.value, work).mantissa

    if isinstance(node, Const):
        return eval_const(node.name, work).mantissa

    if isinstance(node, Neg):
        return -_eval(node.arg, work)

    if isinstance(node, Sqrt):
        a = _eval(node.arg, work)
        if a < 0:
            raise ParamError(f"sqrt of negative value in {to_call(node)}")
        return (math.isqrt(a << (work + 2)) + 1) >> 1

    a = _eval(node.left, work)
    b = _eval(node.right, work)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return round_shift(a * b, work)
    if b == 0:
        raise ParamError(f"Division by zero in {to_call(node)}")
    return _div_round(a << work, b)


def eval_param(expr: ParamExpr, frac_bits: int) -> FixedPoint:
    """
    Evaluate an expression to within a few units of 2^-F.

    Nodes are evaluated EVAL_GUARD_BITS above F; every node adds at most one
    unit at that precision, so the final rounding dominates for any sane depth.
    Dyadic inputs such as 1/2 come out exact.
    """
    work = frac_bits + EVAL_GUARD_BITS
    return FixedPoint(round_shift(_eval(expr, work), EVAL_GUARD_BITS), frac_bits)


class ParamService:
    """Тук са parse -> eval -> ParameterSet и проверката за рационална зависимост."""

    @staticmethod
    def parameter_set(texts: list[str], frac_bits: int) -> ParameterSet:
        errors = validate_param_texts(texts)
        if errors:
            raise ParamError("; ".join(errors))

        raw = tuple(eval_param(parse_param(text), frac_bits) for text in texts)
        params = tuple(reduce(x) for x in raw)

        seen: dict[int, str] = {}
        for text, p in zip(texts, params):
            if p.mantissa in seen:
                raise ParamError(f"Parameters {seen[p.mantissa]!r} and {text!r} coincide at F={frac_bits}.")
            seen[p.mantissa] = text

        ps = ParameterSet(params=params, raw=raw, source_exprs=tuple(texts))
        logger.debug("parameter set at F=%s: %s", frac_bits, ps.describe())
        return ps

    @staticmethod
    def from_values(values: list[FixedPoint], labels: list[str] | None = None) -> ParameterSet:
        # за случайни параметри и тестове, без парсер
        labels = labels or [v.to_decimal(20) for v in values]
        params = tuple(reduce(v) for v in values)
        if len({p.mantissa for p in params}) != len(params):
            raise ParamError("Parameters must be pairwise distinct.")
        return ParameterSet(params=params, raw=tuple(values), source_exprs=tuple(labels))

    @staticmethod
    def unverifiable_transcendentals(texts: list[str]) -> list[str]:
        """
        Expressions whose independence rests on open questions about pi and e.

        One transcendental term next to algebraic ones is provably independent;
        two or more (pi/3 with e/4, or pi+e alone) are not known to be.
        """
        used = {text: constants_used(parse_param(text)) & set(TRANSCENDENTAL_CONSTANTS) for text in texts}
        if sum(len(names) for names in used.values()) < 2:
            return []
        return [text for text, names in used.items() if names]

    @staticmethod
    def default_tolerance(frac_bits: int) -> FixedPoint:
        return FixedPoint(1 << (frac_bits - frac_bits // 2), frac_bits)

    @staticmethod
    def independence_screen(
        ps: ParameterSet, coeff_bound: int, tol: FixedPoint | None = None
    ) -> list[tuple[int, ...]]:
        """
        Brute-force search for (n_0, n_1..n_k), |n_i| <= M, with
        |n_0 + sum n_i alpha_i| <= tol.

        Works on the unreduced values so that relations read the way they were
        typed. Only one sign of each relation is reported (first nonzero n_i
        positive). An empty result is evidence, never a proof.
        """
        if coeff_bound < 1:
            raise ParamError("coeff_bound must be >= 1.")

        F = ps.frac_bits
        tol = tol or ParamService.default_tolerance(F)
        one = 1 << F
        half = one >> 1
        raw = [x.mantissa for x in ps.raw]
        found = []

        for coeffs in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=ps.k):
            lead = next((c for c in coeffs if c), 0)
            if lead <= 0:
                continue

            form = sum(c * a for c, a in zip(coeffs, raw))
            n0 = -((form + half) >> F)
            residual = form + n0 * one
            if abs(n0) <= coeff_bound and abs(residual) <= tol.mantissa:
                found.append((n0, *coeffs))

        if found:
            logger.warning("independence screen: %d suspect relation(s), e.g. %s", len(found), found[0])
        return found
