from dataclasses import replace

import click

from orbitlab.commands.options import (
    digit_stream, experiment, make_writer, parameter_set, parse_ladder, report_written, rng_for, run_options,
    with_config_file, working_precision,
)
from orbitlab.graph.services import (
    build_graph, check_degree_bound, cycle_form_value, find_primitive_cycle, graph_to_json,
    iter_primitive_cycles, walk_trace,
)
from orbitlab.orbit.services import OrbitService
from orbitlab.utils.decorators import exit_codes


@click.command("cycles")
@click.option("--params", "params_text", required=True)
@click.option("--stream", "stream_spec", default="thue-morse", show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=10**6, show_default=True)
@click.option("--t", "t_text", default="1024", show_default=True, help='One scale or a ladder ("64..1024").')
@click.option("--first-only", is_flag=True, help="Check only the first primitive cycle per scale.")
@click.option("--dump-graph", is_flag=True, help="Also write G_t as JSON.")
@click.option("--allow-degenerate", is_flag=True, help="Allow t below the degeneracy threshold.")
@click.option("--no-screen", is_flag=True)
@run_options
@exit_codes
@with_config_file
def cycles_command(params_text, stream_spec, steps, t_text, first_only, dump_graph, allow_degenerate,
                   no_screen, seed, guard_bits, out_dir, force, xlsx, config_file):
    """Primitive cycles of the walk trace and the bound ||sum n_i alpha_i|| <= 2/t."""
    scales = parse_ladder(t_text)
    exp = experiment("cycles", params_text, stream_spec, steps, t_ladder=scales, seed=seed,
                     guard_bits=guard_bits, out_dir=out_dir, force=force, first_only=first_only)
    F = working_precision(steps, max(scales, default=1), exp.guard_bits)
    ps = parameter_set(params_text, F, screen=not no_screen)
    stream = digit_stream(stream_spec, ps.k, F, rng_for(exp))
    orbit = OrbitService.compute_orbit(ps, stream, steps)
    writer = make_writer(exp, F, xlsx)

    ok = True
    results = []
    for t in scales:
        graph = build_graph(ps, t)
        degree_ok, observed = check_degree_bound(graph)
        ok = ok and degree_ok
        if dump_graph:
            writer.text(f"graph_t{t}.json", graph_to_json(graph))

        trace = walk_trace(orbit, t, allow_degenerate=allow_degenerate)
        first = find_primitive_cycle(trace)
        first = replace(first, form_value=cycle_form_value(first, ps))

        checked = 1
        worst = first.form_value
        if not first_only:
            # първият цикъл идва и от итератора; GraphError ако неравенството падне
            checked = 0
            for cycle in iter_primitive_cycles(trace):
                worst = max(worst, cycle_form_value(cycle, ps))
                checked += 1

        results.append({
            "cycle": first.report(),
            "cycles_checked": checked,
            "max_form_value": worst.to_decimal(30),
            "max_degree": observed,
            "degree_bound": 3 * ps.k,
            "boundary_hits": trace.boundary_hits,
            "shrink_steps": first.shrink_steps,
        })
        click.echo(f"t={t}: s={first.s} counts={list(first.counts)} form={first.form_value.to_decimal(12)}")

    writer.json("cycles.json", {"scales": results})
    report_written(writer)
    return ok
