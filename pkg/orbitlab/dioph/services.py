from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction

import numpy as np

from orbitlab.extensions import BudgetError, LabError
from orbitlab.models import (
    MODE_BOX, MODE_POSITIVE, DiophTable, ExponentFit, MinRecord, ParameterSet, SchmidtScan,
)
from orbitlab.numerics.fixed import FixedPoint, round_shift

logger = logging.getLogger(__name__)

# над толкова кортежа отказваме без --force
ENUM_BUDGET = 10**8

RING_BITS = 64
_RING = 1 << RING_BITS
_EMPTY = np.iinfo(np.uint64).max

GOLDEN = (1 + math.sqrt(5)) / 2


class DiophError(LabError):
    pass


# ====================== RING ====================== #
class _Ring:
    """
    Parameters lifted to Z / 2^64: a linear form mod 1 becomes wrapping uint64
    arithmetic and ||x|| is min(v, 2^64 - v). Exact for F <= 64; wider
    parameter sets are rounded to 64 bits first.
    """

    def __init__(self, ps: ParameterSet):
        F = ps.frac_bits
        if F > RING_BITS:
            logger.info("diophantine tables run at F=%d, parameters rounded from F=%d", RING_BITS, F)
            mantissas = [round_shift(m, F - RING_BITS) for m in ps.mantissas]
            F = RING_BITS
        else:
            mantissas = list(ps.mantissas)
        self.frac_bits = F
        self.shift = RING_BITS - F
        self.alphas = [(m << self.shift) % _RING for m in mantissas]
        self.k = len(self.alphas)

    def form(self, coeffs) -> int:
        return sum(c * a for c, a in zip(coeffs, self.alphas)) % _RING

    def multiples(self, ns: np.ndarray) -> np.ndarray:
        # n * alpha_k за целия ред наведнъж, с пренасяне mod 2^64
        return ns.astype(np.int64).astype(np.uint64) * np.uint64(self.alphas[-1])

    @staticmethod
    def dist(values: np.ndarray) -> np.ndarray:
        return np.minimum(values, np.uint64(0) - values)

    def value(self, ring_dist: int) -> FixedPoint:
        return FixedPoint(int(ring_dist) >> self.shift, self.frac_bits)


def _lex_positive(prefix) -> bool:
    return next((c for c in prefix if c), 0) > 0


def _check_budget(count: int, budget: int, force: bool, what: str) -> None:
    if count <= budget:
        return
    if not force:
        raise BudgetError(f"{what}: {count:,} tuples exceed the enumeration budget {budget:,} (use --force).")
    logger.warning("%s: enumerating %s tuples above the budget %s", what, f"{count:,}", f"{budget:,}")


# ====================== LEVEL MINIMA ====================== #
def _box_levels(ring: _Ring, S: int):
    """
    Per-level minima over the half box: level L holds the lex-positive tuples
    with max |n_i| = L. Rows fix the first k-1 coordinates and numpy handles
    the last one; ties keep the lexicographically first tuple.
    """
    best = np.full(S + 1, _EMPTY, dtype=np.uint64)
    arg_row = np.full(S + 1, -1, dtype=np.int64)
    arg_last = np.zeros(S + 1, dtype=np.int64)
    rows = []

    ns = np.arange(-S, S + 1, dtype=np.int64)
    last_vals = ring.multiples(ns)
    levels = np.arange(S + 1, dtype=np.int64)

    for prefix in itertools.product(range(-S, S + 1), repeat=ring.k - 1):
        zero = not any(prefix)
        if not zero and not _lex_positive(prefix):
            continue
        r = len(rows)
        rows.append(prefix)
        P = max((abs(c) for c in prefix), default=0)
        d = ring.dist(last_vals + np.uint64(ring.form(prefix + (0,))))

        if zero:
            # само n_k >= 1, нивото е n_k
            cand = d[S + 1:]
            lv = slice(1, S + 1)
            lasts = levels[1:]
        else:
            seg = d[S - P:S + P + 1]
            j = int(np.argmin(seg))
            if seg[j] < best[P]:
                best[P] = seg[j]
                arg_row[P] = r
                arg_last[P] = j - P
            if P == S:
                continue
            neg = d[S - P - 1::-1]
            pos = d[S + P + 1:]
            cand = np.minimum(neg, pos)
            lv = slice(P + 1, S + 1)
            lasts = np.where(neg <= pos, -levels[P + 1:], levels[P + 1:])

        better = cand < best[lv]
        if better.any():
            best[lv] = np.where(better, cand, best[lv])
            arg_row[lv] = np.where(better, r, arg_row[lv])
            arg_last[lv] = np.where(better, lasts, arg_last[lv])

    return best, arg_row, arg_last, rows


def _positive_levels(ring: _Ring, S: int):
    """Per-level minima with all n_i >= 1, level = n_1 + ... + n_k."""
    best = np.full(S + 1, _EMPTY, dtype=np.uint64)
    arg_row = np.full(S + 1, -1, dtype=np.int64)
    arg_last = np.zeros(S + 1, dtype=np.int64)
    rows = []

    ns = np.arange(0, S + 1, dtype=np.int64)
    last_vals = ring.multiples(ns)

    for prefix in itertools.product(range(1, S), repeat=ring.k - 1):
        q = sum(prefix)
        if q > S - 1:
            continue
        r = len(rows)
        rows.append(prefix)
        d = ring.dist(last_vals[1:S - q + 1] + np.uint64(ring.form(prefix + (0,))))
        lv = slice(q + 1, S + 1)
        better = d < best[lv]
        if better.any():
            best[lv] = np.where(better, d, best[lv])
            arg_row[lv] = np.where(better, r, arg_row[lv])
            arg_last[lv] = np.where(better, ns[1:S - q + 1], arg_last[lv])

    return best, arg_row, arg_last, rows


class DiophService:
    """Brute-force minima of ||n_1 alpha_1 + ... + n_k alpha_k|| and what is fitted on them."""

    @staticmethod
    def table(
        ps: ParameterSet,
        ladder,
        mode: str = MODE_BOX,
        budget: int = ENUM_BUDGET,
        force: bool = False,
    ) -> DiophTable:
        ladder = sorted({int(s) for s in ladder})
        if not ladder or ladder[0] < 1:
            raise DiophError("The s ladder must hold integers >= 1.")
        if mode not in (MODE_BOX, MODE_POSITIVE):
            raise DiophError(f"Unknown mode {mode!r}.")
        k = ps.k
        S = ladder[-1]

        if mode == MODE_BOX:
            _check_budget(((2 * S + 1) ** k - 1) // 2, budget, force, f"Phi up to s={S}")
        else:
            if ladder[0] < k:
                raise DiophError(f"phi needs s >= k = {k}, the constraint set is empty below.")
            _check_budget(math.comb(S, k), budget, force, f"phi up to s={S}")

        ring = _Ring(ps)
        levels = _box_levels if mode == MODE_BOX else _positive_levels
        best, arg_row, arg_last, rows = levels(ring, S)

        records = []
        wanted = set(ladder)
        cur_val, cur_arg = None, None
        for s in range(1, S + 1):
            if best[s] != _EMPTY:
                arg = rows[int(arg_row[s])] + (int(arg_last[s]),)
                v = int(best[s])
                if cur_val is None or v < cur_val or (v == cur_val and arg < cur_arg):
                    cur_val, cur_arg = v, arg
            if s in wanted and cur_val is not None:
                records.append(MinRecord(s=s, value=ring.value(cur_val), argmin=cur_arg, mode=mode))

        F = ring.frac_bits
        floor_m = 1 << (F - F // 2)
        suspect = any(rec.value.mantissa < floor_m for rec in records)
        if suspect:
            logger.warning("%s table invalidated: a minimum lies within 2^-%d of zero", mode, F // 2)
        return DiophTable(mode=mode, records=tuple(records), params=ps, frac_bits=F, suspect=suspect)

    @staticmethod
    def phi(ps: ParameterSet, s: int, budget: int = ENUM_BUDGET, force: bool = False) -> MinRecord:
        return DiophService.table(ps, [s], MODE_BOX, budget, force).record(s)

    @staticmethod
    def phi_positive(ps: ParameterSet, s: int, budget: int = ENUM_BUDGET, force: bool = False) -> MinRecord:
        if s < ps.k:
            raise DiophError(f"phi needs s >= k = {ps.k}, got s={s}.")
        return DiophService.table(ps, [s], MODE_POSITIVE, budget, force).record(s)

    # ---------- bounds ----------
    @staticmethod
    def dirichlet_check(tbl: DiophTable) -> list[int]:
        """Every s with Phi(s) > 2 s^-k."""
        if tbl.mode != MODE_BOX:
            raise DiophError("The Dirichlet check needs a Phi table.")
        k = tbl.params.k
        limit = 2 << tbl.frac_bits
        violations = [rec.s for rec in tbl.records if rec.value.mantissa * rec.s**k > limit]
        if violations:
            logger.warning("Dirichlet bound violated at s=%s", violations[:10])
        return violations

    @staticmethod
    def schmidt_violation_scan(
        ps: ParameterSet,
        delta: Fraction | str,
        s_max: int,
        algebraic: bool = True,
        budget: int = ENUM_BUDGET,
        force: bool = False,
    ) -> SchmidtScan:
        """
        Tuples with every q_i nonzero, |q_i| <= s_max and
        ||sum q_i alpha_i|| * (prod |q_i|)^(1 + delta) <= 1.

        Only the lex-positive sign of each tuple is listed. A float prefilter
        picks candidates; the inequality is then decided exactly.
        """
        k = ps.k
        if k < 2:
            raise DiophError("The Schmidt scan needs k >= 2.")
        if not algebraic:
            raise DiophError("The Schmidt scan applies to algebraic parameters; declare them with --algebraic.")
        delta = Fraction(delta)
        if delta <= 0:
            raise DiophError("delta must be positive.")
        if s_max < 1:
            raise DiophError("s_max must be >= 1.")
        _check_budget((2 * s_max) ** k // 2, budget, force, f"Schmidt scan up to {s_max}")

        ring = _Ring(ps)
        a, b = delta.numerator, delta.denominator
        power = 1 + float(delta)

        lasts = np.concatenate([np.arange(-s_max, 0), np.arange(1, s_max + 1)]).astype(np.int64)
        last_vals = ring.multiples(lasts)
        abs_lasts = np.abs(lasts).astype(float)
        nonzero = [c for c in range(-s_max, s_max + 1) if c]

        entries = []
        for prefix in itertools.product(nonzero, repeat=k - 1):
            if prefix[0] < 0:
                continue
            prod_prefix = math.prod(abs(c) for c in prefix)
            d = ring.dist(last_vals + np.uint64(ring.form(prefix + (0,))))
            approx = d.astype(float) / _RING * (prod_prefix * abs_lasts) ** power
            for idx in np.nonzero(approx <= 1 + 1e-6)[0]:
                n = int(lasts[idx])
                dist = int(d[idx])
                P = prod_prefix * abs(n)
                # ||x||^b P^(a+b) <= 1, с x = dist / 2^64
                if dist**b * P ** (a + b) <= 1 << (RING_BITS * b):
                    entries.append((prefix + (n,), ring.value(dist)))

        scan = SchmidtScan(delta=delta, s_max=s_max, entries=tuple(entries))
        logger.info(
            "Schmidt scan delta=%s s_max=%d: %d tuple(s), stabilization point %d",
            delta, s_max, len(entries), scan.stabilization_point,
        )
        return scan

    @staticmethod
    def compare_scans(smaller: SchmidtScan, larger: SchmidtScan) -> list[tuple[int, ...]]:
        """Tuples the larger scan finds beyond the smaller one."""
        if smaller.delta != larger.delta:
            raise DiophError("Scans with different delta cannot be compared.")
        return sorted(larger.tuples - smaller.tuples)

    # ---------- fits ----------
    @staticmethod
    def exponent_fit(tbl: DiophTable, s_min: int, s_max: int) -> ExponentFit:
        """
        Least squares of log value against log s; tau is minus the slope.

        The envelope variant fits only the last s of each run of equal values,
        the points where value * s^tau peaks ("infinitely many s").
        """
        recs = [rec for rec in tbl.records if s_min <= rec.s <= s_max]
        if len(recs) < 4:
            raise DiophError(f"Exponent fit needs >= 4 rungs in [{s_min}, {s_max}], got {len(recs)}.")
        if any(rec.value.mantissa == 0 for rec in recs):
            raise DiophError("Exponent fit over a zero minimum: the parameters are rationally dependent.")

        xs = np.log(np.array([rec.s for rec in recs], dtype=float))
        ys = np.log(np.array([float(rec.value) for rec in recs]))
        slope, intercept = np.polyfit(xs, ys, 1)
        residual = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))

        ends = [
            i for i in range(len(recs))
            if i == len(recs) - 1 or recs[i + 1].value != recs[i].value
        ]
        envelope = None
        if len(ends) >= 2:
            env_slope, _ = np.polyfit(xs[ends], ys[ends], 1)
            envelope = float(-env_slope)

        fit = ExponentFit(
            tau=float(-slope) + 0.0,
            log_c=float(intercept),
            residual=residual,
            s_min=recs[0].s,
            s_max=recs[-1].s,
            rungs=len(recs),
            envelope_tau=envelope,
        )
        logger.info("exponent fit tau=%.4f logC=%.4f residual=%.4f", fit.tau, fit.log_c, fit.residual)
        return fit

    @staticmethod
    def predicted_min_cover(t: int, fit: ExponentFit) -> int:
        """ceil((C t / 2)^(1/tau)), kept within [1, t]."""
        if t < 1:
            raise DiophError("t must be >= 1.")
        if fit.tau <= 0:
            return t
        value = math.ceil((math.exp(fit.log_c) * t / 2) ** (1 / fit.tau))
        return min(max(value, 1), t)

    @staticmethod
    def predicted_dimension(fit: ExponentFit) -> float:
        if fit.tau <= 0:
            raise DiophError("No dimension bound from a non-positive exponent.")
        return 1 / fit.tau

    # ---------- k = 1 oracle ----------
    @staticmethod
    def convergent_denominators(alpha: FixedPoint, q_max: int) -> list[int]:
        """Continued-fraction denominators q_n <= q_max of |alpha| mod 1."""
        x = Fraction(abs(alpha.mantissa) % alpha.one, alpha.one)
        qs = [1]
        q_prev, q = 0, 1
        while x:
            x = 1 / x
            a = math.floor(x)
            x -= a
            q_prev, q = q, a * q + q_prev
            if q > q_max:
                break
            if q != qs[-1]:
                qs.append(q)
        return qs

    @staticmethod
    def cf_phi(alpha: FixedPoint, s: int) -> MinRecord:
        """Phi(s) for k = 1 read off the convergents: records of ||q alpha|| are convergent denominators."""
        one = alpha.one
        best = None
        for q in DiophService.convergent_denominators(alpha, s):
            m = (q * alpha.mantissa) % one
            d = min(m, one - m)
            if best is None or d < best[0]:
                best = (d, q)
        d, q = best
        return MinRecord(s=s, value=FixedPoint(d, alpha.frac_bits), argmin=(q,), mode=MODE_BOX)

    # ---------- golden ratio scan ----------
    @staticmethod
    def golden_pair_scan(ps: ParameterSet, eps: float, k_max: int) -> list[tuple[int, int, float]]:
        """Positive pairs with ||k1 alpha_1 + k2 alpha_2|| <= eps max(k1, k2)^-gamma, gamma the golden ratio."""
        if ps.k != 2:
            raise DiophError("The golden-ratio scan needs exactly two parameters.")
        ring = _Ring(ps)
        ks = np.arange(1, k_max + 1, dtype=np.int64)
        last_vals = ring.multiples(ks)
        weights = eps * ks.astype(float) ** (-GOLDEN)

        pairs = []
        for k1 in range(1, k_max + 1):
            d = ring.dist(last_vals + np.uint64(ring.form((k1, 0))))
            values = d.astype(float) / _RING
            bound = weights[np.maximum(ks, k1) - 1]
            for idx in np.nonzero(values <= bound)[0]:
                pairs.append((k1, int(ks[idx]), float(values[idx])))
        logger.info("golden pairs up to %d: %d found", k_max, len(pairs))
        return pairs
