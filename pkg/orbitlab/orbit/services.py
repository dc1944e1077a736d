from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from orbitlab.extensions import LabError
from orbitlab.models import AvoidanceResult, ContainmentReport, GapProfile, Orbit, ParameterSet
from orbitlab.numerics.fixed import CirclePoint, FixedPoint
from orbitlab.numerics.services import dist_to_zero, reduce, reduce_mantissa
from orbitlab.params.services import ParamService
from orbitlab.sequences.streams import DigitStream, ExplicitStream, RecurrentBuilder, RecurrentStream

logger = logging.getLogger(__name__)

# над тази дължина return_points минава на doubling вместо на орбита
RETURN_DIRECT_LIMIT = 1 << 22


class OrbitError(LabError):
    pass


class ConstructionFailure(OrbitError):
    """Both the alpha-step and the beta-step landed in (-eps, eps)."""

    def __init__(self, step: int, point: FixedPoint):
        super().__init__(f"Avoidance construction failed at step {step}: x = {point.to_decimal(20)}.")
        self.step = step
        self.point = point


def _check_digits(digits, k: int) -> None:
    bad = next((d for d in digits if not 1 <= d <= k), None)
    if bad is not None:
        raise OrbitError(f"Digit {bad} outside 1..{k}.")


def _ring_orbit(alphas: tuple[int, ...], digits: list[int], frac_bits: int) -> list[int]:
    # F <= 64: mantissa << (64 - F) живее в Z/2^64, cumsum прави редукцията сам
    shift = 64 - frac_bits
    half = 1 << (frac_bits - 1)
    steps = np.array([(a << shift) & ((1 << 64) - 1) for a in alphas], dtype=np.uint64)
    ring = np.cumsum(steps[np.asarray(digits, dtype=np.int64) - 1], dtype=np.uint64)
    signed = (ring.view(np.int64) >> np.int64(shift)).tolist()
    # -2^63 е точно 0.5, а то принадлежи на (-0.5, 0.5] отгоре
    return [0] + [half if m == -half else m for m in signed]


def _loop_orbit(alphas: tuple[int, ...], digits: list[int], frac_bits: int) -> list[int]:
    one = 1 << frac_bits
    half = one >> 1
    m = 0
    out = [0]
    for d in digits:
        m += alphas[d - 1]
        if m > half:
            m -= one
        elif m <= -half:
            m += one
        out.append(m)
    return out


class OrbitService:
    """
    Orbits x_i = {x_{i-1} + alpha_omega(i)} and everything read off them.

    Every point is an exact dyadic, so identities such as the return
    recursion or segment translation come out as exact zeros.
    """

    @staticmethod
    def compute_orbit(ps: ParameterSet, stream: DigitStream, steps: int) -> Orbit:
        if steps < 0:
            raise OrbitError("steps must be >= 0.")
        digits = stream.prefix(steps)
        _check_digits(digits, ps.k)

        F = ps.frac_bits
        if steps and F <= 64:
            mantissas = _ring_orbit(ps.mantissas, digits, F)
        else:
            mantissas = _loop_orbit(ps.mantissas, digits, F)

        logger.debug("orbit N=%s F=%s stream=%s", steps, F, stream.spec)
        return Orbit(params=ps, stream=stream, digits=tuple(digits), mantissas=tuple(mantissas), frac_bits=F)

    @staticmethod
    def word_endpoint(word, ps: ParameterSet) -> CirclePoint:
        _check_digits(word, ps.k)
        alphas = ps.mantissas
        return reduce(FixedPoint(sum(alphas[d - 1] for d in word), ps.frac_bits))

    @staticmethod
    def delta(a, b, ps: ParameterSet) -> CirclePoint:
        """Delta(a, b) = x_{|b|}(b) - x_{|a|}(a), reduced."""
        return reduce(OrbitService.word_endpoint(b, ps) - OrbitService.word_endpoint(a, ps))

    # ---------- return points ----------
    @staticmethod
    def return_points(
        builder: RecurrentBuilder,
        ps: ParameterSet,
        depth: int,
        method: str = "auto",
        direct_limit: int = RETURN_DIRECT_LIMIT,
    ) -> list[CirclePoint]:
        """
        x_{L_1}, ..., x_{L_depth} for the builder's prefix lengths L_i.

        "direct" reads the points off an explicit orbit of length L_depth,
        "closed" uses x_{L_i} = E(omega_{i-1}) + E(a_i) with the endpoint
        doubling E(omega_i) = 2 E(omega_{i-1}) + E(a_i), which costs O(depth).
        "auto" goes direct while L_depth <= direct_limit.
        """
        if not 1 <= depth <= builder.depth:
            raise OrbitError(f"depth must be in 1..{builder.depth}, got {depth}.")
        if method not in ("auto", "direct", "closed"):
            raise OrbitError(f"Unknown return point method {method!r}.")

        last = builder.prefix_length(depth)
        if method == "auto":
            method = "direct" if last <= direct_limit else "closed"
        logger.debug("return points depth=%s L=%s method=%s", depth, last, method)

        if method == "direct":
            orbit = OrbitService.compute_orbit(ps, RecurrentStream(builder), last)
            return [orbit.point(builder.prefix_length(i)) for i in range(1, depth + 1)]

        F = ps.frac_bits
        stage = OrbitService.word_endpoint(builder.words[0], ps).mantissa
        points = []
        for i in range(1, depth + 1):
            word = OrbitService.word_endpoint(builder.words[i], ps).mantissa
            points.append(CirclePoint(reduce_mantissa(stage + word, F), F))
            stage = reduce_mantissa(2 * stage + word, F)
        return points

    @staticmethod
    def check_return_recursion(
        builder: RecurrentBuilder, ps: ParameterSet, depth: int, method: str = "auto"
    ) -> FixedPoint:
        """max_i ||x_{L_{i+1}} - 2 x_{L_i} - Delta(a_i, a_{i+1})||, exactly zero."""
        if depth < 2:
            raise OrbitError("depth must be >= 2 for the return recursion.")
        points = OrbitService.return_points(builder, ps, depth, method)

        worst = FixedPoint.zero(ps.frac_bits)
        for i in range(1, depth):
            d = OrbitService.delta(builder.words[i], builder.words[i + 1], ps)
            residual = dist_to_zero(points[i] - points[i - 1] * 2 - d)
            worst = max(worst, residual)
        if worst.mantissa:
            logger.error("return recursion residual %s at F=%s", worst.to_decimal(), ps.frac_bits)
        return worst

    # ---------- avoidance ----------
    @staticmethod
    def avoidance_orbit(
        alpha: FixedPoint,
        beta: FixedPoint,
        eps: FixedPoint,
        steps: int,
        labels: list[str] | None = None,
        strict: bool = True,
    ) -> AvoidanceResult:
        """
        x_i = {x_{i-1} + alpha} unless that lands in (-eps, eps), else {x_{i-1} + beta}.

        A beta-step that also lands inside is a construction failure: raised in
        strict mode, otherwise recorded and the step is taken anyway.
        """
        ps = ParamService.from_values([alpha, beta], labels)
        F = ps.frac_bits
        if eps.frac_bits != F:
            eps = eps.rescale(F)
        gap = dist_to_zero(ps.params[0] - ps.params[1])
        if not (0 < eps.mantissa and 2 * eps.mantissa < gap.mantissa):
            raise OrbitError(
                f"Need 0 < eps < ||alpha - beta|| / 2 = {float(gap.to_fraction()) / 2:.6g}, got {eps.to_decimal(12)}."
            )

        a, b = ps.mantissas
        e = eps.mantissa
        m = 0
        digits, mantissas, failures = [], [0], []
        for i in range(1, steps + 1):
            nxt = reduce_mantissa(m + a, F)
            digit = 1
            if abs(nxt) < e:
                nxt = reduce_mantissa(m + b, F)
                digit = 2
                if abs(nxt) < e:
                    if strict:
                        raise ConstructionFailure(i, FixedPoint(nxt, F))
                    failures.append(i)
            digits.append(digit)
            mantissas.append(nxt)
            m = nxt

        if failures:
            logger.warning("avoidance: %d construction failure(s), first at step %d", len(failures), failures[0])

        stream = ExplicitStream(digits, spec=f"avoidance:eps={eps.to_decimal(12)}", kind="avoidance")
        orbit = Orbit(params=ps, stream=stream, digits=tuple(digits), mantissas=tuple(mantissas), frac_bits=F)
        return AvoidanceResult(orbit=orbit, stream=stream, eps=eps, failures=tuple(failures))

    @staticmethod
    def avoidance_central_intervals(eps: FixedPoint | Fraction, t: int) -> list[int]:
        """Partition intervals of I_t lying inside the open interval (-eps, eps)."""
        e = eps.to_fraction() if isinstance(eps, FixedPoint) else Fraction(eps)
        out = []
        for j in range(t):
            lo = Fraction(-1, 2) + Fraction(j, t)
            hi = lo + Fraction(1, t)
            if lo > -e and hi < e:
                out.append(j)
        return out

    # ---------- diagnostics ----------
    @staticmethod
    def gap_stats(orbit: Orbit) -> GapProfile:
        pts = sorted(set(orbit.mantissas))
        one = 1 << orbit.frac_bits
        gaps = [b - a for a, b in zip(pts, pts[1:])]
        # обикалящата празнина от последната до първата точка
        gaps.append(one - (pts[-1] - pts[0]))
        return GapProfile(gaps=tuple(gaps), frac_bits=orbit.frac_bits)

    @staticmethod
    def best_return(orbit: Orbit) -> tuple[int, FixedPoint]:
        if orbit.length < 1:
            raise OrbitError("min_return needs at least one step.")
        i, m = min(enumerate(orbit.mantissas[1:], start=1), key=lambda item: (abs(item[1]), item[0]))
        return i, FixedPoint(abs(m), orbit.frac_bits)

    @staticmethod
    def min_return(orbit: Orbit) -> FixedPoint:
        return OrbitService.best_return(orbit)[1]

    @staticmethod
    def segment_translation_residual(orbit: Orbit, i: int, j: int) -> FixedPoint:
        """||x_{i+j} - x_i - E(omega(i+1..i+j))||."""
        if i < 0 or j < 0 or i + j > orbit.length:
            raise OrbitError(f"Segment {i}+{j} outside the orbit (N={orbit.length}).")
        end = OrbitService.word_endpoint(orbit.digits[i:i + j], orbit.params)
        return dist_to_zero(orbit.point(i + j) - orbit.point(i) - end)

    @staticmethod
    def shift_containment_check(
        stream: DigitStream, ps: ParameterSet, steps: int, prefix_len: int, tol: FixedPoint | None = None
    ) -> ContainmentReport:
        """
        Translated partial orbits of a recurring block against the orbit itself.

        The block is omega(2..prefix_len+1), the prefix of the shifted tail. At
        every occurrence p (block = omega(p+1..p+prefix_len)) the points
        x_p + E(block[:j]) are compared with x_{p+j}.
        """
        if prefix_len < 1:
            raise OrbitError("prefix_len must be >= 1.")
        tol = tol if tol is not None else ParamService.default_tolerance(ps.frac_bits)

        orbit = OrbitService.compute_orbit(ps, stream, steps)
        digits = orbit.digits
        block = digits[1:prefix_len + 1]
        if len(block) < prefix_len:
            raise OrbitError(f"Need at least {prefix_len + 1} steps for the shifted block.")

        occurrences = [
            p for p in range(0, steps - prefix_len + 1)
            if digits[p:p + prefix_len] == block
        ]
        if len(occurrences) < 2:
            raise OrbitError(f"Block {list(block)} does not recur within the first {steps} digits.")

        F = ps.frac_bits
        alphas = ps.mantissas
        partial = []
        acc = 0
        for d in block:
            acc += alphas[d - 1]
            partial.append(acc)

        worst = 0
        for p in occurrences:
            base = orbit.mantissas[p]
            for j, e in enumerate(partial, start=1):
                dev = abs(reduce_mantissa(base + e - orbit.mantissas[p + j], F))
                worst = max(worst, dev)

        report = ContainmentReport(
            block=tuple(block), occurrences=tuple(occurrences), max_deviation=FixedPoint(worst, F), tol=tol
        )
        logger.info("containment: %d occurrences, max deviation %s", len(occurrences), report.max_deviation)
        return report
