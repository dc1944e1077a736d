import click

from orbitlab.commands.options import (
    experiment, make_writer, parameter_set, report_written, run_options, with_config_file,
    working_precision,
)
from orbitlab.covering.services import occupied
from orbitlab.numerics.fixed import FixedPoint
from orbitlab.orbit.services import OrbitService
from orbitlab.params.parser import ParamError
from orbitlab.utils.decorators import exit_codes


@click.command("avoidance")
@click.option("--params", "params_text", default="pi/3,e/4", show_default=True,
              help="alpha,beta of the construction.")
@click.option("--eps", "eps_values", multiple=True, default=("0.05", "0.1"), show_default=True,
              help="Half-width of the avoided interval (repeatable).")
@click.option("--steps", type=click.IntRange(min=1), default=10**6, show_default=True)
@click.option("--t", "t", type=click.IntRange(min=1), default=1024, show_default=True)
@click.option("--lenient", is_flag=True, help="Record construction failures instead of stopping.")
@run_options
@exit_codes
@with_config_file
def avoidance_command(params_text, eps_values, steps, t, lenient,
                      seed, guard_bits, out_dir, force, xlsx, config_file):
    """Orbit that steps by beta whenever alpha would land in (-eps, eps)."""
    exp = experiment("avoidance", params_text, "", steps, t_ladder=(t,), seed=seed, guard_bits=guard_bits,
                     out_dir=out_dir, force=force, eps=list(eps_values), lenient=lenient)
    F = working_precision(steps, t, exp.guard_bits)
    ps = parameter_set(params_text, F)
    if ps.k != 2:
        raise ParamError(f"avoidance needs exactly two parameters, got {ps.k}.")
    alpha, beta = ps.params
    writer = make_writer(exp, F, xlsx)

    ok = True
    runs = []
    for text in eps_values:
        eps = FixedPoint.from_fraction(text, F)
        result = OrbitService.avoidance_orbit(alpha, beta, eps, steps, list(ps.source_exprs), strict=not lenient)
        orbit = result.orbit

        inside = sum(1 for m in orbit.mantissas[1:] if abs(m) < eps.mantissa)
        _, bitmap = occupied(orbit, t, start=1)
        central = OrbitService.avoidance_central_intervals(eps, t)
        central_hit = [j for j in central if bitmap[j]]
        passed = inside == 0 and not result.failures and not central_hit
        ok = ok and passed

        runs.append({
            "eps": text,
            "points_inside": inside,
            "construction_failures": list(result.failures),
            "beta_steps": result.beta_steps,
            "min_return": OrbitService.min_return(orbit).to_decimal(30),
            "t": t,
            "occupied": int(bitmap.sum()),
            "central_intervals": len(central),
            "central_intervals_hit": central_hit,
            "passed": passed,
        })
        click.echo(f"eps={text}: {inside} point(s) inside, {len(result.failures)} failure(s), "
                   f"{len(central)} central intervals, {len(central_hit)} hit")

    writer.json("avoidance.json", {"runs": runs})
    report_written(writer)
    return ok
