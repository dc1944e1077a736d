import logging
from functools import wraps

import click

from orbitlab.extensions import BudgetError, InputError, LabError

logger = logging.getLogger("orbitlab")

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def exit_codes(f):
    """
    Превежда резултата на командата в exit code.
    - върнато False -> 1 (assertion не минава)
    - BudgetError -> 3, InputError (лош израз или stream spec) -> 2
    - друг LabError -> 1
    грешките в самите флагове ги хваща click сам, също с код 2.
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            result = f(*args, **kwargs)
        except BudgetError as e:
            logger.error("%s", e)
            ctx.exit(EXIT_BUDGET)
        except InputError as e:
            logger.error("%s", e)
            ctx.exit(EXIT_USAGE)
        except LabError as e:
            logger.error("%s", e)
            ctx.exit(EXIT_FAILED)

        if result is False:
            ctx.exit(EXIT_FAILED)
        return result
    return decorated_function
