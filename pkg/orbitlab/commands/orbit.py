import click

from orbitlab.commands.options import (
    digit_stream, experiment, make_writer, parameter_set, report_written, rng_for, run_options,
    with_config_file, working_precision,
)
from orbitlab.orbit.services import OrbitService
from orbitlab.utils.decorators import exit_codes


@click.command("orbit")
@click.option("--params", "params_text", required=True, help='Comma-separated expressions, e.g. "sqrt(2),sqrt(3)".')
@click.option("--stream", "stream_spec", default="thue-morse", show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--no-screen", is_flag=True, help="Skip the rational independence screen.")
@run_options
@exit_codes
@with_config_file
def orbit_command(params_text, stream_spec, steps, no_screen, seed, guard_bits, out_dir, force, xlsx, config_file):
    """Orbit x_0..x_N as CSV (i, digit, x_i) plus a gap summary."""
    exp = experiment("orbit", params_text, stream_spec, steps, seed=seed, guard_bits=guard_bits,
                     out_dir=out_dir, force=force)
    F = working_precision(steps, 1, exp.guard_bits)
    ps = parameter_set(params_text, F, screen=not no_screen)
    stream = digit_stream(stream_spec, ps.k, F, rng_for(exp))

    orbit = OrbitService.compute_orbit(ps, stream, steps)
    writer = make_writer(exp, F, xlsx)

    rows = (
        (i, orbit.digits[i - 1], orbit.point(i).to_decimal(30))
        for i in range(1, orbit.length + 1)
    )
    writer.csv("orbit.csv", ["i", "digit", "x_i"], rows)

    summary = {"N": steps, "F": F, "params": ps.describe(), "stream": stream.spec}
    if steps >= 1:
        gaps = OrbitService.gap_stats(orbit)
        i, value = OrbitService.best_return(orbit)
        summary.update({
            "max_gap": gaps.max_gap.to_decimal(30),
            "distinct_gaps": gaps.distinct,
            "min_return": value.to_decimal(30),
            "min_return_index": i,
        })
    writer.json("orbit_summary.json", summary)

    report_written(writer)
    return True

