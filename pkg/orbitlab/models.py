from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from orbitlab.numerics.fixed import CirclePoint, FixedPoint


# ====================== PARAMETERS ====================== #
@dataclass(frozen=True)
class ParameterSet:
    # params са редуцираните alpha_i, raw са стойностите преди редукция
    params: tuple[CirclePoint, ...]
    raw: tuple[FixedPoint, ...]
    source_exprs: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.params)

    @property
    def frac_bits(self) -> int:
        return self.params[0].frac_bits

    @property
    def mantissas(self) -> tuple[int, ...]:
        return tuple(p.mantissa for p in self.params)

    def alpha(self, digit: int) -> CirclePoint:
        # цифрите са 1..k
        return self.params[digit - 1]

    def describe(self) -> list[str]:
        return [f"{expr} -> {p.to_decimal(20)}" for expr, p in zip(self.source_exprs, self.params)]


# ====================== ORBITS ====================== #
@dataclass(frozen=True)
class Orbit:
    params: ParameterSet
    stream: Any
    digits: tuple[int, ...]       # omega(1)..omega(N)
    mantissas: tuple[int, ...]    # x_0..x_N
    frac_bits: int

    @property
    def length(self) -> int:
        return len(self.mantissas) - 1

    def point(self, i: int) -> CirclePoint:
        return CirclePoint(self.mantissas[i], self.frac_bits)

    @property
    def points(self) -> list[CirclePoint]:
        return [CirclePoint(m, self.frac_bits) for m in self.mantissas]


@dataclass(frozen=True)
class GapProfile:
    gaps: tuple[int, ...]         # mantissas, in circle order
    frac_bits: int

    @property
    def max_gap(self) -> FixedPoint:
        return FixedPoint(max(self.gaps), self.frac_bits)

    @property
    def distinct(self) -> int:
        return len(set(self.gaps))

    def sorted_gaps(self) -> list[FixedPoint]:
        return [FixedPoint(g, self.frac_bits) for g in sorted(self.gaps)]


@dataclass(frozen=True)
class AvoidanceResult:
    orbit: Orbit
    stream: Any
    eps: FixedPoint
    failures: tuple[int, ...] = ()

    @property
    def beta_steps(self) -> int:
        return sum(1 for d in self.orbit.digits if d == 2)


@dataclass(frozen=True)
class ContainmentReport:
    block: tuple[int, ...]
    occurrences: tuple[int, ...]
    max_deviation: FixedPoint
    tol: FixedPoint

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


# ====================== COVERING ====================== #
@dataclass(frozen=True)
class Partition:
    t: int

    def interval(self, j: int) -> tuple[Fraction, Fraction]:
        return Fraction(-1, 2) + Fraction(j, self.t), Fraction(-1, 2) + Fraction(j + 1, self.t)

    def __len__(self) -> int:
        return self.t


@dataclass(frozen=True)
class CoverProfile:
    ladder: tuple[int, ...]
    counts: tuple[int, ...]
    slopes: tuple[float, ...]
    steps: int
    frac_bits: int
    resolution_limit: int
    forced: bool = False

    @property
    def min_slope(self) -> float:
        return min(self.slopes) if self.slopes else 0.0

    @property
    def max_slope(self) -> float:
        return max(self.slopes) if self.slopes else 0.0

    def summary(self) -> dict:
        # min/max наклоните са само заместители на liminf/limsup
        return {
            "min_slope": self.min_slope,
            "max_slope": self.max_slope,
            "min_slope_is": "lower box dimension proxy",
            "max_slope_is": "upper box dimension proxy",
            "ladder": list(self.ladder),
            "N": self.steps,
            "F": self.frac_bits,
            "resolution_limit": self.resolution_limit,
            "forced": self.forced,
        }


# ====================== ROTATION GRAPH ====================== #
@dataclass(frozen=True)
class RotationGraph:
    t: int
    k: int
    # targets[source][digit - 1] -> sorted targets
    targets: tuple[tuple[tuple[int, ...], ...], ...]

    def out_edges(self, source: int) -> list[tuple[int, int]]:
        return [
            (digit, b)
            for digit, bs in enumerate(self.targets[source], start=1)
            for b in bs
        ]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(a, b, digit) for a in range(self.t) for digit, b in self.out_edges(a)]

    def has_edge(self, source: int, target: int, digit: int) -> bool:
        return target in self.targets[source][digit - 1]

    def out_degrees(self) -> list[int]:
        return [len(self.out_edges(a)) for a in range(self.t)]

    def in_degrees(self) -> list[int]:
        deg = [0] * self.t
        for _, b, _ in self.edges():
            deg[b] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(max(self.out_degrees()), max(self.in_degrees()))

    def self_loops(self) -> list[tuple[int, int]]:
        return [(a, digit) for a, b, digit in self.edges() if a == b]

    def parallel_edges(self) -> list[tuple[int, int]]:
        seen: dict[tuple[int, int], int] = {}
        for a, b, _ in self.edges():
            seen[(a, b)] = seen.get((a, b), 0) + 1
        return sorted(pair for pair, n in seen.items() if n > 1)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "k": self.k,
            "edges": [{"from": a, "to": b, "digit": d} for a, b, d in self.edges()],
        }


@dataclass(frozen=True)
class WalkTrace:
    t: int
    indices: tuple[int, ...]     # g_1..g_{N+1}
    orbit: Orbit
    boundary_hits: int = 0

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class CycleWitness:
    t: int
    start: int                   # 1-based positions in the trace
    end: int
    counts: tuple[int, ...]      # n_1..n_k
    shrink_steps: int = 0
    form_value: FixedPoint | None = None

    @property
    def s(self) -> int:
        return self.end - self.start

    def report(self) -> dict:
        return {
            "t": self.t,
            "s": self.s,
            "counts": list(self.counts),
            "form_value": self.form_value.to_decimal() if self.form_value is not None else None,
            "bound": str(Fraction(2, self.t)),
            "positions": [self.start, self.end],
        }


# ====================== DIOPHANTINE ====================== #
MODE_BOX = "Phi"
MODE_POSITIVE = "phi"


@dataclass(frozen=True)
class MinRecord:
    s: int
    value: FixedPoint
    argmin: tuple[int, ...]
    mode: str = MODE_BOX


@dataclass(frozen=True)
class DiophTable:
    mode: str
    records: tuple[MinRecord, ...]
    params: ParameterSet
    frac_bits: int
    suspect: bool = False

    @property
    def valid(self) -> bool:
        return not self.suspect

    def record(self, s: int) -> MinRecord:
        for rec in self.records:
            if rec.s == s:
                return rec
        raise KeyError(s)

    @property
    def ladder(self) -> list[int]:
        return [rec.s for rec in self.records]


@dataclass(frozen=True)
class ExponentFit:
    tau: float
    log_c: float
    residual: float
    s_min: int
    s_max: int
    rungs: int
    envelope_tau: float | None = None

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "logC": self.log_c,
            "residual": self.residual,
            "range": [self.s_min, self.s_max],
            "rungs": self.rungs,
            "envelope_tau": self.envelope_tau,
        }


@dataclass(frozen=True)
class SchmidtScan:
    delta: Fraction
    s_max: int
    # (q_1..q_k, value)
    entries: tuple[tuple[tuple[int, ...], FixedPoint], ...]
    # как се чете произведението в неравенството
    reading: str = "product of |q_i| over all k coordinates, all q_i nonzero"

    @property
    def tuples(self) -> set[tuple[int, ...]]:
        return {q for q, _ in self.entries}

    @property
    def stabilization_point(self) -> int:
        return max((max(abs(x) for x in q) for q, _ in self.entries), default=0)

    @property
    def stable(self) -> bool:
        return self.stabilization_point <= self.s_max // 2


# ====================== EXPERIMENT ====================== #
@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: tuple[str, ...] = ()
    stream: str = "thue-morse"
    steps: int = 0
    t_ladder: tuple[int, ...] = ()
    s_ladder: tuple[int, ...] = ()
    seed: int = 0
    guard_bits: int = 32
    out_dir: str = "out"
    force: bool = False
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["options"] = {k: self.options[k] for k in sorted(self.options)}
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), default=str)
