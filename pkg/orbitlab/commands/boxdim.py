import click

from orbitlab.commands.options import (
    digit_stream, experiment, make_writer, parameter_set, parse_ladder, report_written, rng_for, run_options,
    with_config_file, working_precision,
)
from orbitlab.covering.services import box_dim_profile, min_cover
from orbitlab.orbit.services import OrbitService
from orbitlab.utils.decorators import exit_codes


@click.command("boxdim")
@click.option("--params", "params_text", required=True)
@click.option("--stream", "stream_spec", default="thue-morse", show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=10**6, show_default=True)
@click.option("--t-ladder", "t_ladder_text", default="8..1024", show_default=True,
              help='Scales, "8,16,32" or "8..1024" for powers of two.')
@click.option("--min-cover", "with_min_cover", is_flag=True,
              help="Also count minimal covers by free intervals (small N only).")
@click.option("--no-screen", is_flag=True)
@run_options
@exit_codes
@with_config_file
def boxdim_command(params_text, stream_spec, steps, t_ladder_text, with_min_cover, no_screen,
                   seed, guard_bits, out_dir, force, xlsx, config_file):
    """Occupied-interval counts over a scale ladder and the log-log slopes."""
    ladder = parse_ladder(t_ladder_text)
    exp = experiment("boxdim", params_text, stream_spec, steps, t_ladder=ladder, seed=seed,
                     guard_bits=guard_bits, out_dir=out_dir, force=force, min_cover=with_min_cover)
    F = working_precision(steps, max(ladder, default=1), exp.guard_bits)
    ps = parameter_set(params_text, F, screen=not no_screen)
    stream = digit_stream(stream_spec, ps.k, F, rng_for(exp))

    orbit = OrbitService.compute_orbit(ps, stream, steps)
    profile = box_dim_profile(orbit, ladder, force=force)
    writer = make_writer(exp, F, xlsx)

    slopes = ("",) + tuple(f"{s:.6f}" for s in profile.slopes)
    header = ["t", "count", "slope"]
    rows = [[t, c, s] for t, c, s in zip(profile.ladder, profile.counts, slopes)]
    if with_min_cover:
        header.append("min_cover")
        for row in rows:
            row.append(min_cover(orbit, row[0]))
    writer.csv("boxdim.csv", header, rows)
    writer.json("boxdim.json", profile.summary())

    click.echo(f"min slope {profile.min_slope:.4f}, max slope {profile.max_slope:.4f} (box dimension proxies)")
    report_written(writer)
    return True
