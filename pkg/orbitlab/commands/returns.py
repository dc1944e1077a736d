import click

from orbitlab.commands.options import (
    digit_stream, experiment, make_writer, parameter_set, report_written, rng_for, run_options, settings,
    with_config_file,
)
from orbitlab.orbit.services import OrbitService
from orbitlab.sequences.streams import RecurrentStream, SequenceError
from orbitlab.utils.decorators import exit_codes


@click.command("returns")
@click.option("--params", "params_text", required=True)
@click.option("--stream", "stream_spec", required=True,
              help='A recurrent stream, e.g. "recurrent:words=1;2;1 2,cycle".')
@click.option("--depth", type=click.IntRange(min=1), default=15, show_default=True)
@click.option("--method", type=click.Choice(["auto", "direct", "closed"]), default="auto", show_default=True)
@click.option("--cross-check", is_flag=True, help="Compare direct and closed return points (small depth).")
@run_options
@exit_codes
@with_config_file
def returns_command(params_text, stream_spec, depth, method, cross_check,
                    seed, guard_bits, out_dir, force, xlsx, config_file):
    """Return points x_{L_i} and the residual of x_{L_{i+1}} = 2 x_{L_i} + Delta(a_i, a_{i+1})."""
    cfg = settings()
    exp = experiment("returns", params_text, stream_spec, 0, seed=seed, guard_bits=guard_bits,
                     out_dir=out_dir, force=force, depth=depth, method=method)
    F = cfg.DIOPH_FRAC_BITS
    ps = parameter_set(params_text, F)
    stream = digit_stream(stream_spec, ps.k, F, rng_for(exp))
    if not isinstance(stream, RecurrentStream):
        raise SequenceError("returns needs a recurrent stream spec.")
    builder = stream.builder

    points = OrbitService.return_points(builder, ps, depth, method, cfg.RETURN_DIRECT_LIMIT)
    writer = make_writer(exp, F, xlsx)
    rows = (
        (i, builder.prefix_length(i), p.to_decimal(30))
        for i, p in enumerate(points, start=1)
    )
    writer.csv("returns.csv", ["i", "L_i", "x_L_i"], rows)

    summary = {"depth": depth, "method": method}
    ok = True
    if depth >= 2:
        residual = OrbitService.check_return_recursion(builder, ps, depth, method)
        summary["max_residual"] = residual.to_decimal(30)
        ok = residual.mantissa == 0
    if cross_check:
        direct = OrbitService.return_points(builder, ps, depth, "direct")
        closed = OrbitService.return_points(builder, ps, depth, "closed")
        summary["direct_equals_closed"] = direct == closed
        ok = ok and direct == closed

    writer.json("returns.json", summary)
    click.echo(f"depth {depth}: residual {summary.get('max_residual', '-')}")
    report_written(writer)
    return ok
