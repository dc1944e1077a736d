from __future__ import annotations

import logging
import random
from fractions import Fraction

from orbitlab.covering.services import box_dim_profile, occupied
from orbitlab.dioph.services import DiophService
from orbitlab.extensions import LabError
from orbitlab.graph.services import build_graph, check_degree_bound, cycle_form_value, iter_primitive_cycles, walk_trace
from orbitlab.models import MODE_BOX, MODE_POSITIVE
from orbitlab.numerics.fixed import FixedPoint
from orbitlab.numerics.services import precision_budget
from orbitlab.orbit.services import OrbitService
from orbitlab.params.services import ParamService
from orbitlab.sequences.analysis import complexity_profile, linear_complexity_constant
from orbitlab.sequences.specs import parse_stream_spec
from orbitlab.sequences.streams import PeriodicStream, RecurrentBuilder, RecurrentStream, ThueMorseStream
from orbitlab.utils.oracles import threshold

logger = logging.getLogger(__name__)

PAIR = ("sqrt(2)", "sqrt(3)")
DIOPH_BITS = 64
CHAIN_SCALE = 2**10
DEGREE_SCALES = (2**7, 2**10)
CYCLING_WORDS = ((1,), (2,), (1, 2))
# думи за случайните builder-и; празната дума е позволена след a_0
RANDOM_WORDS = ((1,), (2,), (1, 2), (2, 1), (1, 1, 2), (2, 2, 1), ())
TAU_RANGE = (1.8, 2.3)
SLOPE_RANGE = (0.95, 1.0)
STURMIAN_N = 30
CONTAINMENT_PREFIX = 8
# регистриран праг = ORACLE_FACTOR x оракула, 3 значещи цифри
ORACLE_FACTOR = 2


def _result(name, passed, detail, **extra):
    return {"name": name, "passed": bool(passed), "detail": detail, **extra}


def cycling_orbit(steps, guard_bits=32):
    """Orbit of the cycling builder over the sqrt(2), sqrt(3) pair; the density oracles are measured on it."""
    F = max(precision_budget(max(steps, 1), CHAIN_SCALE, guard_bits), 64)
    stream = RecurrentStream(RecurrentBuilder.cycling(CYCLING_WORDS), "recurrent:cycle")
    return OrbitService.compute_orbit(ParamService.parameter_set(list(PAIR), F), stream, steps)


def registered_threshold(oracle_value):
    return float(f"{ORACLE_FACTOR * float(oracle_value):.3g}")


def geometric_ladder(lo, hi, per_octave=8):
    """Целите s от lo до hi на равни стъпки в log s, краищата са включени."""
    out = set()
    j = 0
    while True:
        s = round(lo * 2 ** (j / per_octave))
        if s > hi:
            break
        out.add(s)
        j += 1
    out.add(hi)
    return sorted(out)


class VerificationService:
    """
    The acceptance matrix. Every check returns a result dict and never raises,
    so a failing criterion does not hide the ones after it.
    """

    def __init__(self, cfg, oracles, seed=None, guard_bits=None):
        self.cfg = cfg
        self.guard_bits = cfg.GUARD_BITS if guard_bits is None else guard_bits
        self.oracles = oracles
        self.rng = random.Random(cfg.SEED if seed is None else seed)
        self._fit = None
        self._thue_morse = None

    # ---------- shared inputs ----------
    def _frac_bits(self, steps, t):
        return max(precision_budget(max(steps, 1), t, self.guard_bits), 64)

    def _pair(self, frac_bits):
        return ParamService.parameter_set(list(PAIR), frac_bits)

    def _thue_morse_orbit(self):
        if self._thue_morse is None:
            steps = self.cfg.VERIFY_STEPS
            F = self._frac_bits(steps, max(self.cfg.VERIFY_CYCLE_SCALES + (CHAIN_SCALE,)))
            self._thue_morse = OrbitService.compute_orbit(self._pair(F), ThueMorseStream(), steps)
        return self._thue_morse

    def _random_pair(self):
        # тегли докато скринингът не намери релация
        while True:
            values = [FixedPoint(self.rng.randrange(-(1 << 63), 1 << 63), DIOPH_BITS) for _ in range(2)]
            if values[0] == values[1]:
                continue
            ps = ParamService.from_values(values)
            if not ParamService.independence_screen(ps, self.cfg.SCREEN_BOUND):
                return ps

    # ---------- criteria ----------
    def check_cycle_inequality(self):
        orbit = self._thue_morse_orbit()
        ps = orbit.params
        per_scale = {}
        for t in self.cfg.VERIFY_CYCLE_SCALES:
            trace = walk_trace(orbit, t)
            count = 0
            worst = FixedPoint.zero(ps.frac_bits)
            for cycle in iter_primitive_cycles(trace):
                worst = max(worst, cycle_form_value(cycle, ps))
                count += 1
            if count == 0:
                return _result("cycle_inequality", False, f"t={t}: no primitive cycle in the trace")
            per_scale[str(t)] = {"cycles": count, "max_form_value": worst.to_decimal(12),
                                 "bound": str(Fraction(2, t))}
        return _result("cycle_inequality", True, f"every primitive cycle within 2/t at t={list(per_scale)}",
                       scales=per_scale)

    def check_dirichlet(self):
        S = self.cfg.VERIFY_DIRICHLET_S
        sets = [self._pair(DIOPH_BITS)] + [self._random_pair() for _ in range(self.cfg.VERIFY_DIRICHLET_PAIRS)]
        failing = []
        for ps in sets:
            tbl = DiophService.table(ps, range(1, S + 1), MODE_BOX, self.cfg.ENUM_BUDGET)
            violations = DiophService.dirichlet_check(tbl)
            if violations or not tbl.valid:
                failing.append({"params": list(ps.source_exprs), "violations": violations[:10], "valid": tbl.valid})
        return _result("dirichlet", not failing, f"{len(sets)} parameter set(s), s <= {S}", failing=failing)

    def check_schmidt_exponent(self):
        lo, hi = self.cfg.VERIFY_FIT_RANGE
        tbl = DiophService.table(self._pair(DIOPH_BITS), geometric_ladder(lo, hi), MODE_BOX, self.cfg.ENUM_BUDGET)
        self._fit = DiophService.exponent_fit(tbl, lo, hi)
        tau = self._fit.tau
        low, high = TAU_RANGE
        return _result("schmidt_exponent", low <= tau <= high,
                       f"tau={tau:.4f} on s in [{lo}, {hi}], expected [{low}, {high}]",
                       fit=self._fit.to_dict())

    def check_cf_oracle(self):
        S = self.cfg.VERIFY_CF_S
        ps = ParamService.parameter_set(["sqrt(2)"], DIOPH_BITS)
        tbl = DiophService.table(ps, range(1, S + 1), MODE_BOX, self.cfg.ENUM_BUDGET)
        alpha = ps.params[0]
        mismatched = []
        for rec in tbl.records:
            cf = DiophService.cf_phi(alpha, rec.s)
            if (cf.value, cf.argmin) != (rec.value, rec.argmin):
                mismatched.append(rec.s)
        return _result("cf_oracle", not mismatched, f"Phi against convergents for s <= {S}",
                       mismatched=mismatched[:20])

    def check_return_recursion(self):
        ps = self._pair(DIOPH_BITS)
        depth = self.cfg.VERIFY_RETURN_DEPTH
        bad = []
        for n in range(self.cfg.VERIFY_BUILDERS):
            builder = RecurrentBuilder.random(RANDOM_WORDS, self.rng)
            residual = OrbitService.check_return_recursion(builder, ps, depth, "auto")
            closed = OrbitService.return_points(builder, ps, depth, "closed")
            direct = OrbitService.return_points(builder, ps, depth, "auto", self.cfg.RETURN_DIRECT_LIMIT)
            if residual.mantissa or closed != direct:
                bad.append(n)
        return _result("return_recursion", not bad,
                       f"{self.cfg.VERIFY_BUILDERS} random builder(s), depth {depth}", failing_builders=bad)

    def _cycling_orbit(self, steps):
        return cycling_orbit(steps, self.guard_bits)

    def check_density(self):
        rows = {}
        passed = True
        for steps in self.cfg.VERIFY_DENSITY_STEPS:
            gap = float(OrbitService.gap_stats(self._cycling_orbit(steps)).max_gap)
            limit = threshold(self.oracles, "density_max_gap", steps)
            rows[str(steps)] = {"max_gap": gap, "threshold": limit}
            passed = passed and gap <= limit
        return _result("density", passed, "max gap of the cycling builder orbit", steps=rows)

    def check_min_return(self):
        steps = max(self.cfg.VERIFY_DENSITY_STEPS)
        i, value = OrbitService.best_return(self._cycling_orbit(steps))
        limit = threshold(self.oracles, "min_return", steps)
        return _result("min_return", float(value) <= limit,
                       f"min_return={float(value):.3g} at i={i}, threshold {limit:.3g} (N={steps})")

    def check_avoidance(self):
        steps = self.cfg.VERIFY_STEPS
        t = CHAIN_SCALE
        F = self._frac_bits(steps, t)
        ps = ParamService.parameter_set(["pi/3", "e/4"], F)
        runs = {}
        passed = True
        for text in self.cfg.VERIFY_AVOID_EPS:
            eps = FixedPoint.from_fraction(text, F)
            result = OrbitService.avoidance_orbit(*ps.params, eps, steps, list(ps.source_exprs), strict=False)
            inside = sum(1 for m in result.orbit.mantissas[1:] if abs(m) < eps.mantissa)
            _, bitmap = occupied(result.orbit, t, start=1)
            central = OrbitService.avoidance_central_intervals(eps, t)
            hit = [j for j in central if bitmap[j]]
            runs[text] = {"points_inside": inside, "failures": len(result.failures),
                          "central_intervals": len(central), "central_hit": len(hit)}
            passed = passed and inside == 0 and not result.failures and not hit
        return _result("avoidance", passed, f"alpha=pi/3, beta=e/4, N={steps}, t={t}", runs=runs)

    def check_complexity(self):
        window = self.cfg.VERIFY_COMPLEXITY_WINDOW
        sturmian = parse_stream_spec("sturmian:theta=phi-1", 2, DIOPH_BITS)
        p_sturm = complexity_profile(sturmian, STURMIAN_N, window)
        sturm_ok = p_sturm == [n + 1 for n in range(1, STURMIAN_N + 1)]

        expected = list(self.oracles["thue_morse_complexity"])
        p_tm = complexity_profile(ThueMorseStream(), len(expected), window)

        cycling = RecurrentStream(RecurrentBuilder.cycling(CYCLING_WORDS))
        C = linear_complexity_constant(cycling, STURMIAN_N, window)
        return _result(
            "complexity", sturm_ok and p_tm == expected,
            f"Sturmian p_n = n+1 up to {STURMIAN_N}: {sturm_ok}; Thue-Morse {p_tm} vs {expected}; C={C:.3f}",
            linear_constant=C,
        )

    def check_degree_bound(self):
        ps = self._pair(DIOPH_BITS)
        observed = {}
        passed = True
        for t in DEGREE_SCALES:
            ok, degree = check_degree_bound(build_graph(ps, t))
            observed[str(t)] = degree
            passed = passed and ok
        return _result("degree_bound", passed, f"max degree {observed}, bound {3 * ps.k}", observed=observed)

    def check_single_rotation_dimension(self):
        steps = self.cfg.VERIFY_STEPS
        ladder = self.cfg.VERIFY_DIM_LADDER
        F = self._frac_bits(steps, ladder[-1])
        ps = ParamService.parameter_set(["sqrt(2)"], F)
        orbit = OrbitService.compute_orbit(ps, PeriodicStream([1], "periodic:1"), steps)
        profile = box_dim_profile(orbit, ladder)
        low, high = SLOPE_RANGE
        return _result("single_rotation_dimension",
                       all(low <= s <= high + 1e-12 for s in profile.slopes),
                       f"slopes in [{profile.min_slope:.4f}, {profile.max_slope:.4f}]",
                       slopes=list(profile.slopes))

    def check_box_below_positive(self):
        S = self.cfg.VERIFY_COMPARE_S
        ps = self._pair(DIOPH_BITS)
        ladder = range(2, S + 1)
        box = DiophService.table(ps, ladder, MODE_BOX, self.cfg.ENUM_BUDGET)
        pos = DiophService.table(ps, ladder, MODE_POSITIVE, self.cfg.ENUM_BUDGET)
        bad = [s for s in ladder if box.record(s).value > pos.record(s).value]
        return _result("box_below_positive", not bad, f"Phi(s) <= phi(s) for s in [2, {S}]", violations=bad[:20])

    def check_chain(self):
        if self._fit is None:
            return _result("chain", False, "no exponent fit available")
        count, _ = occupied(self._thue_morse_orbit(), CHAIN_SCALE)
        predicted = DiophService.predicted_min_cover(CHAIN_SCALE, self._fit)
        return _result("chain", count >= predicted,
                       f"occupied {count} at t={CHAIN_SCALE}, predicted at least {predicted}")

    # ---------- extras ----------
    def check_golden_pairs(self):
        k_max = 10 * self.cfg.VERIFY_COMPARE_S
        pairs = DiophService.golden_pair_scan(self._pair(DIOPH_BITS), 1.0, k_max)
        wanted = int(self.oracles.get("golden_pairs_min", 5))
        return _result("golden_pairs", len(pairs) >= wanted, f"{len(pairs)} pair(s) up to {k_max}, need {wanted}")

    def check_containment(self):
        steps = min(self.cfg.VERIFY_STEPS, 10**5)
        ps = self._pair(self._frac_bits(steps, CHAIN_SCALE))
        report = OrbitService.shift_containment_check(ThueMorseStream(), ps, steps, CONTAINMENT_PREFIX)
        return _result("containment", report.passed,
                       f"{len(report.occurrences)} occurrence(s), max deviation {report.max_deviation.to_decimal(6)}")

    CHECKS = (
        "check_cycle_inequality",
        "check_dirichlet",
        "check_schmidt_exponent",
        "check_cf_oracle",
        "check_return_recursion",
        "check_density",
        "check_min_return",
        "check_avoidance",
        "check_complexity",
        "check_degree_bound",
        "check_single_rotation_dimension",
        "check_box_below_positive",
        "check_chain",
        "check_golden_pairs",
        "check_containment",
    )

    def run(self, name):
        check = getattr(self, name)
        short = name.removeprefix("check_")
        try:
            result = check()
        except LabError as e:
            logger.error("%s: %s", short, e)
            return _result(short, False, str(e), error=True)
        logger.info("%s: %s", result["name"], "pass" if result["passed"] else "FAIL")
        return result

    def run_all(self, only=None):
        names = [n for n in self.CHECKS if not only or n.removeprefix("check_") in only]
        return [self.run(name) for name in names]
