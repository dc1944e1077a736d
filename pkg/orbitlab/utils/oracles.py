import json
import logging
import os

from orbitlab.extensions import LabError

logger = logging.getLogger(__name__)

# ползват се ако няма регистриран файл; праговете за плътност идват само от файла
DEFAULT_ORACLES = {
    "thue_morse_complexity": [2, 4, 6, 10],
    "golden_pairs_min": 5,
}


class OracleError(LabError):
    """A criterion needs a threshold that was never pre-registered."""


def load_oracles(path):
    """
    Зареждам регистрираните прагове от JSON файла.
    Ако файлът липсва или е счупен, падам обратно към DEFAULT_ORACLES.
    """
    data = {}
    if path and os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            logger.warning("oracle file %s unreadable (%s), using defaults", path, e)
            data = {}
    else:
        logger.info("no oracle file at %s, using defaults", path)

    merged = dict(DEFAULT_ORACLES)
    merged.update({k: v for k, v in data.items() if not k.startswith("_")})
    return merged


def threshold(oracles, key, steps):
    """Регистрираният праг за даден N; без него критерият не може да се провери."""
    table = oracles.get(key) or {}
    value = table.get(str(steps))
    if value is None:
        raise OracleError(
            f"No registered {key} threshold for N={steps}; run tools/preregister_oracles.py."
        )
    return float(value)
