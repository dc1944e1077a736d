from __future__ import annotations

import json
import logging
from collections.abc import Iterator, Sequence

from orbitlab.covering.services import interval_index
from orbitlab.extensions import LabError
from orbitlab.models import CycleWitness, Orbit, ParameterSet, RotationGraph, WalkTrace
from orbitlab.numerics.fixed import FixedPoint
from orbitlab.numerics.services import dist_to_zero, reduce_mantissa

logger = logging.getLogger(__name__)


class GraphError(LabError):
    pass


# ====================== GRAPH ====================== #
def _targets(j: int, alpha: int, frac_bits: int, t: int) -> tuple[int, ...]:
    """
    Intervals met by the translate of interval j under alpha.

    Positions are counted from -0.5 in units of 1/(t 2^F), so the left
    endpoint sits at j 2^F + alpha t and everything is an integer. The left
    image is read with floor, the right one with ceil - 1 so that a translate
    landing exactly on an interval has a single target.
    """
    unit = 1 << frac_bits
    total = t * unit
    left = (j * unit + alpha * t) % total
    right = (left + unit) % total or total
    a = left // unit
    b = -(-right // unit) - 1
    return (a,) if a == b else tuple(sorted((a, b)))


def build_graph(ps: ParameterSet, t: int) -> RotationGraph:
    if t < 1:
        raise GraphError(f"t must be >= 1, got {t}.")
    F = ps.frac_bits
    targets = tuple(
        tuple(_targets(j, alpha, F, t) for alpha in ps.mantissas)
        for j in range(t)
    )
    return RotationGraph(t=t, k=ps.k, targets=targets)


def degeneracy_threshold(ps: ParameterSet) -> int:
    """
    Smallest power of two t with 1/t < ||alpha_i|| for every i and
    2/t < ||alpha_i - alpha_j|| for every pair; above it G_t has no loops
    and no parallel edges.

    The pair condition is 2/t, not 1/t: a translate of a length-1/t interval
    meets two partition intervals, so the target sets of digits i and j can
    share an interval whenever their shifts differ by less than 2/t. With
    1/t the pair {sqrt(2), sqrt(3)} would get t=4, where both digits reach a
    common target. The bound is sufficient, not sharp: {0.3, 0.4} gets 32
    although G_16 happens to have no parallel edges.
    """
    F = ps.frac_bits
    one = 1 << F
    floor_m = 1 << (F - F // 2)

    norms = [abs(reduce_mantissa(a, F)) for a in ps.mantissas]
    if any(n < floor_m for n in norms):
        raise GraphError(f"Degenerate parameter: some ||alpha_i|| < 2^-{F // 2} at F={F}.")
    gaps = [
        abs(reduce_mantissa(a - b, F))
        for i, a in enumerate(ps.mantissas)
        for b in ps.mantissas[i + 1:]
    ]
    if any(g < floor_m for g in gaps):
        raise GraphError(f"Degenerate parameters: two alpha_i coincide within 2^-{F // 2}.")

    t = 1
    while not (all(one < t * n for n in norms) and all(2 * one < t * g for g in gaps)):
        t *= 2
    return t


def check_degree_bound(graph: RotationGraph) -> tuple[bool, int]:
    """In/out degree <= 3k; the observed maximum is logged next to it."""
    observed = graph.max_degree
    bound = 3 * graph.k
    logger.info("G_%s: max degree %d (bound 3k = %d)", graph.t, observed, bound)
    return observed <= bound, observed


def graph_to_json(graph: RotationGraph) -> str:
    return json.dumps(graph.to_dict(), sort_keys=True, indent=2)


# ====================== WALK TRACE ====================== #
def walk_trace(orbit: Orbit, t: int, allow_degenerate: bool = False) -> WalkTrace:
    """
    g_j = interval_index(x_{j-1}, t) for j = 1..N+1.

    Every step (g_j, g_{j+1}) has to be an edge of G_t labelled omega(j). Steps
    touching x = 0.5 exactly are skipped by that check (the clamp puts 0.5 in
    the last interval while the circle puts it next to -0.5) and counted.
    """
    ps = orbit.params
    if not allow_degenerate:
        threshold = degeneracy_threshold(ps)
        if t < threshold:
            raise GraphError(f"t={t} is below the degeneracy threshold {threshold}.")

    F = orbit.frac_bits
    half = 1 << (F - 1)
    last = t - 1
    indices = [min(((m + half) * t) >> F, last) for m in orbit.mantissas]

    graph = build_graph(ps, t)
    boundary_hits = 0
    for i, digit in enumerate(orbit.digits):
        if orbit.mantissas[i] == half or orbit.mantissas[i + 1] == half:
            boundary_hits += 1
            continue
        if indices[i + 1] not in graph.targets[indices[i]][digit - 1]:
            raise GraphError(
                f"Step {i + 1}: {indices[i]} -> {indices[i + 1]} is not an edge of G_{t} for digit {digit}."
            )

    if boundary_hits:
        logger.warning("walk trace at t=%s: %d step(s) touch x = 0.5 exactly", t, boundary_hits)
    return WalkTrace(t=t, indices=tuple(indices), orbit=orbit, boundary_hits=boundary_hits)


# ====================== PRIMITIVE CYCLES ====================== #
def shrink_to_primitive(seq: Sequence[int], k1: int, k2: int) -> tuple[int, int, int]:
    """
    Shrink a repeat pair seq[k1] == seq[k2] (0-based) to a primitive cycle.

    At every step the enclosed segment is scanned from the left; the first
    repeat found has the least k2 and, with last occurrences, the largest k1.
    Returns (k1, k2, steps).
    """
    if not (0 <= k1 < k2 < len(seq)) or seq[k1] != seq[k2]:
        raise GraphError(f"({k1}, {k2}) is not a repeat pair.")

    steps = 0
    while True:
        last: dict[int, int] = {}
        pair = None
        for p in range(k1, k2 + 1):
            v = seq[p]
            if v in last:
                pair = (last[v], p)
                break
            last[v] = p
        if pair == (k1, k2):
            return k1, k2, steps
        k1, k2 = pair
        steps += 1


def _outer_pair(seq: Sequence[int], lo: int, hi: int) -> tuple[int, int] | None:
    # първата позиция чиято стойност се повтаря, с нейното следващо появяване
    first: dict[int, int] = {}
    second: dict[int, int] = {}
    for p in range(lo, hi):
        v = seq[p]
        if v not in first:
            first[v] = p
        elif v not in second:
            second[v] = p
    if not second:
        return None
    v = min(second, key=lambda value: first[value])
    return first[v], second[v]


def primitive_cycle(seq: Sequence[int], lo: int = 0, window: int | None = None) -> tuple[int, int, int] | None:
    """First primitive cycle in seq[lo:lo+window] as (k1, k2, shrink steps), 0-based."""
    hi = len(seq) if window is None else min(len(seq), lo + window)
    pair = _outer_pair(seq, lo, hi)
    if pair is None and hi < len(seq):
        pair = _outer_pair(seq, lo, len(seq))
    if pair is None:
        return None
    return shrink_to_primitive(seq, *pair)


def _witness(trace: WalkTrace, k1: int, k2: int, steps: int) -> CycleWitness:
    k = trace.orbit.params.k
    counts = [0] * k
    # ребрата от g_{k1} до g_{k2} носят цифрите omega(k1+1)..omega(k2)
    for d in trace.orbit.digits[k1:k2]:
        counts[d - 1] += 1
    return CycleWitness(t=trace.t, start=k1 + 1, end=k2 + 1, counts=tuple(counts), shrink_steps=steps)


def find_primitive_cycle(trace: WalkTrace) -> CycleWitness:
    found = primitive_cycle(trace.indices, 0, trace.t + 1)
    if found is None:
        raise GraphError(f"Trace of length {len(trace)} has no repeat (need more than t={trace.t} entries).")
    return _witness(trace, *found)


def _first_repeat(seq: Sequence[int], lo: int) -> tuple[int, int] | None:
    # най-ранният край с последното предишно появяване: вече е примитивен цикъл
    last: dict[int, int] = {}
    for p in range(lo, len(seq)):
        v = seq[p]
        if v in last:
            return last[v], p
        last[v] = p
    return None


def iter_primitive_cycles(trace: WalkTrace, limit: int | None = None) -> Iterator[CycleWitness]:
    """
    Successive primitive cycles, each scan restarting at the previous cycle's end.

    The first repeat of a left-to-right scan is the cycle the shrinking in
    find_primitive_cycle ends on, so the long runs take it directly.
    """
    lo = 0
    produced = 0
    while limit is None or produced < limit:
        found = _first_repeat(trace.indices, lo)
        if found is None:
            return
        k1, k2 = found
        yield _witness(trace, k1, k2, 0)
        produced += 1
        lo = k2


def cycle_form_value(cycle: CycleWitness, ps: ParameterSet) -> FixedPoint:
    """||sum n_i alpha_i|| for the cycle's digit counts, checked against 2/t."""
    if len(cycle.counts) != ps.k:
        raise GraphError(f"Cycle has {len(cycle.counts)} counts, parameter set has k={ps.k}.")
    F = ps.frac_bits
    value = dist_to_zero(FixedPoint(sum(n * a for n, a in zip(cycle.counts, ps.mantissas)), F))
    if value.mantissa * cycle.t > 2 << F:
        raise GraphError(
            f"Cycle inequality violated at t={cycle.t}: {value.to_decimal(20)} > 2/{cycle.t}."
        )
    return value
