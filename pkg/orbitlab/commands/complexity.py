import click

from orbitlab.commands.options import (
    digit_stream, experiment, make_writer, report_written, rng_for, run_options, with_config_file,
)
from orbitlab.sequences.analysis import (
    balance_defect, complexity_profile, eventual_period, linear_complexity_constant, recurrence_gap,
    sturmian_witness,
)
from orbitlab.utils.decorators import exit_codes

FRAC_BITS = 64


@click.command("complexity")
@click.option("--stream", "stream_spec", default="thue-morse", show_default=True)
@click.option("--k", "alphabet", type=click.IntRange(min=1), default=2, show_default=True,
              help="Alphabet size (digits 1..k).")
@click.option("--n-max", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--window", type=click.IntRange(min=1), default=10**5, show_default=True)
@click.option("--digit", type=click.IntRange(min=1), default=1, show_default=True,
              help="Digit counted by the balance defect.")
@click.option("--expect", default="", help='Expected p_1..p_m, e.g. "2,4,6,10"; mismatch exits 1.')
@run_options
@exit_codes
@with_config_file
def complexity_command(stream_spec, alphabet, n_max, window, digit, expect,
                       seed, guard_bits, out_dir, force, xlsx, config_file):
    """Block complexity p_n, balance defect and recurrence gaps over a window."""
    exp = experiment("complexity", "", stream_spec, window, seed=seed, guard_bits=guard_bits,
                     out_dir=out_dir, force=force, k=alphabet, n_max=n_max, digit=digit)
    stream = digit_stream(stream_spec, alphabet, FRAC_BITS, rng_for(exp))
    if stream.length is not None and stream.length < window:
        window = stream.length

    profile = complexity_profile(stream, n_max, window)
    writer = make_writer(exp, FRAC_BITS, xlsx)

    rows = []
    for n, p in enumerate(profile, start=1):
        gap = recurrence_gap(stream, n, window) if window >= 2 * n else None
        rows.append([n, p, balance_defect(stream, digit, n, window), "" if gap is None else gap])
    writer.csv("complexity.csv", ["n", "p_n", "balance_defect", "recurrence_gap"], rows)

    period = eventual_period(stream, window, max_period=min(window // 2, 1000))
    summary = {
        "window": window,
        "n_max": n_max,
        "window_note": "p_n over a finite window is a lower bound",
        "linear_constant": linear_complexity_constant(stream, n_max, window),
        "sturmian_witness": sturmian_witness(stream, n_max, window, alphabet),
        "eventual_period": None if period is None else {"preperiod": period[0], "period": period[1]},
    }

    ok = True
    if expect:
        wanted = [int(x) for x in expect.split(",") if x.strip()]
        summary["expected"] = wanted
        ok = profile[:len(wanted)] == wanted
        summary["matches_expected"] = ok

    writer.json("complexity.json", summary)
    click.echo("p_n: " + " ".join(str(p) for p in profile))
    report_written(writer)
    return ok
