import click
from dotenv import load_dotenv

# .env трябва да е зареден преди config.py да прочете os.environ
load_dotenv()

from config import config  # noqa: E402
from orbitlab.extensions import init_logging  # noqa: E402


def create_cli(config_name="default"):
    cfg = config[config_name]

    @click.group(context_settings={"help_option_names": ["-h", "--help"]})
    @click.version_option(cfg.TOOL_VERSION, prog_name=cfg.TOOL_NAME)
    @click.option("--log-level", default=cfg.LOG_LEVEL, show_default=True,
                  type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
    @click.option("-q", "--quiet", is_flag=True, help="Only warnings and errors on stderr.")
    @click.pass_context
    def cli(ctx, log_level, quiet):
        """Multi-rotation orbit lab: orbits, covers, cycles and Diophantine tables."""
        init_logging("WARNING" if quiet else log_level)
        ctx.obj = {"config": cfg}

    from orbitlab.commands import avoidance, boxdim, complexity, cycles, dioph, orbit, returns, verify

    cli.add_command(orbit.orbit_command)
    cli.add_command(boxdim.boxdim_command)
    cli.add_command(cycles.cycles_command)
    cli.add_command(dioph.dioph_command)
    cli.add_command(complexity.complexity_command)
    cli.add_command(avoidance.avoidance_command)
    cli.add_command(returns.returns_command)
    cli.add_command(verify.verify_command)

    return cli
