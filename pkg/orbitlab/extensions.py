import logging

from rich.console import Console
from rich.logging import RichHandler

# логовете отиват само в stderr, stdout и артефактите остават чисти
console = Console(stderr=True)


class LabError(Exception):
    """Base for every error the lab raises on purpose."""


class BudgetError(LabError):
    """An enumeration budget or resolution guard was exceeded without --force."""


class InputError(LabError):
    """A malformed expression or stream spec; the CLI treats it as a usage error."""


def init_logging(level="INFO"):
    handler = RichHandler(console=console, show_path=False, rich_tracebacks=True)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))

    root = logging.getLogger("orbitlab")
    root.handlers[:] = [handler]
    root.setLevel(level.upper() if isinstance(level, str) else level)
    root.propagate = False
    return root
