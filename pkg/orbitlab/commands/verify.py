import click
from rich.console import Console
from rich.table import Table

from config import config
from orbitlab.commands.options import experiment, make_writer, report_written, run_options, settings, with_config_file
from orbitlab.utils.decorators import exit_codes
from orbitlab.utils.oracles import load_oracles
from orbitlab.verification.services import VerificationService

CRITERIA = tuple(name.removeprefix("check_") for name in VerificationService.CHECKS)


def _summary_table(results):
    table = Table(title="Acceptance matrix")
    table.add_column("#", justify="right")
    table.add_column("criterion")
    table.add_column("result", justify="center")
    table.add_column("detail", overflow="fold")
    for i, r in enumerate(results, start=1):
        mark = "[green]pass[/green]" if r["passed"] else "[red]FAIL[/red]"
        table.add_row(str(i), r["name"], mark, r["detail"])
    return table


@click.command("verify-all")
@click.option("--quick", is_flag=True, help="Desk-scale matrix instead of the full acceptance sizes.")
@click.option("--only", multiple=True, type=click.Choice(CRITERIA), help="Run only these criteria (repeatable).")
@click.option("--oracles", "oracle_file", default=None, help="Pre-registered thresholds (JSON).")
@run_options
@exit_codes
@with_config_file
def verify_command(quick, only, oracle_file, seed, guard_bits, out_dir, force, xlsx, config_file):
    """Run the acceptance matrix and write verify.json; exit 0 iff every criterion passes."""
    cfg = config["quick"] if quick else settings()
    exp = experiment("verify-all", seed=seed, guard_bits=guard_bits, out_dir=out_dir, force=force,
                     quick=quick, only=sorted(only))
    oracles = load_oracles(oracle_file or cfg.ORACLE_FILE)

    service = VerificationService(cfg, oracles, seed=exp.seed, guard_bits=exp.guard_bits)
    results = service.run_all(only)

    passed = sum(1 for r in results if r["passed"])
    writer = make_writer(exp, 64, xlsx)
    writer.json("verify.json", {"results": results, "passed": passed, "total": len(results)})

    Console().print(_summary_table(results))
    click.echo(f"{passed}/{len(results)} criteria passed")
    report_written(writer)
    return passed == len(results)
