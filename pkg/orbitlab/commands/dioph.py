import click

from orbitlab.commands.options import (
    experiment, make_writer, parameter_set, parse_ladder, report_written, run_options, settings,
    with_config_file,
)
from orbitlab.dioph.services import DiophError, DiophService
from orbitlab.models import MODE_BOX, MODE_POSITIVE
from orbitlab.utils.decorators import exit_codes

MODES = {"phi": MODE_BOX, "phi-positive": MODE_POSITIVE}
CHECKS = ("dirichlet", "fit", "schmidt", "golden", "compare", "cf")


def _table_rows(tbl):
    for rec in tbl.records:
        yield [tbl.mode, rec.s, rec.value.to_decimal(30), *rec.argmin]


@click.command("dioph")
@click.option("--params", "params_text", required=True)
@click.option("--mode", type=click.Choice(sorted(MODES)), default="phi", show_default=True,
              help="phi: box |n_i| <= s; phi-positive: n_i >= 1 with sum <= s.")
@click.option("--s-max", type=click.IntRange(min=1), default=500, show_default=True)
@click.option("--s-ladder", "s_ladder_text", default="", help="Explicit s values instead of 1..s-max.")
@click.option("--check", "checks", multiple=True, type=click.Choice(CHECKS), help="Checks to run (repeatable).")
@click.option("--fit-range", default="32,4096", show_default=True, help="s_min,s_max of the exponent fit.")
@click.option("--predict-t", type=click.IntRange(min=1), default=1024, show_default=True,
              help="Scale for the predicted minimal number of occupied intervals.")
@click.option("--delta", default="1", show_default=True, help="Schmidt exponent delta (a rational).")
@click.option("--schmidt-s", type=click.IntRange(min=1), default=200, show_default=True,
              help="Schmidt scan bound; the scan is repeated at twice this bound.")
@click.option("--algebraic", is_flag=True, help="Declare the parameters algebraic (Schmidt scan).")
@click.option("--golden-kmax", type=click.IntRange(min=1), default=10**4, show_default=True)
@click.option("--golden-eps", type=float, default=1.0, show_default=True)
@click.option("--no-screen", is_flag=True)
@run_options
@exit_codes
@with_config_file
def dioph_command(params_text, mode, s_max, s_ladder_text, checks, fit_range, predict_t, delta, schmidt_s,
                  algebraic, golden_kmax, golden_eps, no_screen, seed, guard_bits, out_dir, force, xlsx,
                  config_file):
    """Diophantine minima tables, bound checks and the exponent fit."""
    cfg = settings()
    ladder = parse_ladder(s_ladder_text) or tuple(range(1, s_max + 1))
    exp = experiment("dioph", params_text, "", 0, s_ladder=ladder, seed=seed, guard_bits=guard_bits,
                     out_dir=out_dir, force=force, mode=mode, checks=sorted(checks), delta=delta)
    F = cfg.DIOPH_FRAC_BITS
    ps = parameter_set(params_text, F, screen=not no_screen)

    if MODES[mode] == MODE_POSITIVE:
        # под s = k множеството е празно
        ladder = tuple(s for s in ladder if s >= ps.k)
    tbl = DiophService.table(ps, ladder, MODES[mode], cfg.ENUM_BUDGET, force)
    writer = make_writer(exp, tbl.frac_bits, xlsx)
    header = ["mode", "s", "value"] + [f"n_{i}" for i in range(1, ps.k + 1)]
    writer.csv("dioph_table.csv", header, _table_rows(tbl))

    ok = tbl.valid or not checks
    results = {"valid": tbl.valid, "mode": tbl.mode}

    if "dirichlet" in checks:
        violations = DiophService.dirichlet_check(tbl)
        results["dirichlet"] = {"violations": violations}
        ok = ok and not violations

    if "compare" in checks:
        other_mode = MODE_POSITIVE if tbl.mode == MODE_BOX else MODE_BOX
        other_ladder = [s for s in ladder if s >= ps.k]
        other = DiophService.table(ps, other_ladder, other_mode, cfg.ENUM_BUDGET, force)
        box, pos = (tbl, other) if tbl.mode == MODE_BOX else (other, tbl)
        bad = [s for s in other_ladder if box.record(s).value > pos.record(s).value]
        results["compare"] = {"violations": bad}
        ok = ok and not bad

    if "cf" in checks:
        if ps.k != 1 or tbl.mode != MODE_BOX:
            raise DiophError("The continued-fraction oracle applies to k = 1 Phi tables.")
        alpha = ps.params[0].rescale(tbl.frac_bits)
        mismatched = []
        for rec in tbl.records:
            cf = DiophService.cf_phi(alpha, rec.s)
            if (cf.value, cf.argmin) != (rec.value, rec.argmin):
                mismatched.append(rec.s)
        results["cf"] = {"mismatched": mismatched}
        ok = ok and not mismatched

    if "fit" in checks:
        lo, hi = (int(x) for x in fit_range.split(","))
        fit = DiophService.exponent_fit(tbl, lo, hi)
        payload = fit.to_dict()
        payload["predicted_min_cover"] = {"t": predict_t, "count": DiophService.predicted_min_cover(predict_t, fit)}
        if fit.tau > 0:
            payload["predicted_dimension"] = DiophService.predicted_dimension(fit)
        writer.json("dioph_fit.json", payload)
        click.echo(f"tau={fit.tau:.4f} logC={fit.log_c:.4f} residual={fit.residual:.4f}")

    if "schmidt" in checks:
        small = DiophService.schmidt_violation_scan(ps, delta, schmidt_s, algebraic, cfg.ENUM_BUDGET, force)
        large = DiophService.schmidt_violation_scan(ps, delta, 2 * schmidt_s, algebraic, cfg.ENUM_BUDGET, force)
        results["schmidt"] = {
            "delta": str(small.delta),
            "reading": small.reading,
            "s_max": [small.s_max, large.s_max],
            "tuples": [list(q) for q in sorted(large.tuples)],
            "new_at_larger_scale": [list(q) for q in DiophService.compare_scans(small, large)],
            "stabilization_point": large.stabilization_point,
            "stable": small.stable and large.stable,
        }

    if "golden" in checks:
        pairs = DiophService.golden_pair_scan(ps, golden_eps, golden_kmax)
        results["golden"] = {"eps": golden_eps, "k_max": golden_kmax, "count": len(pairs),
                             "pairs": [[k1, k2, v] for k1, k2, v in pairs[:200]]}

    writer.json("dioph_checks.json", results)
    report_written(writer)
    return ok
