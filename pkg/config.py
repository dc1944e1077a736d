import os


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value else default


class Config:
    """базови настройки за лабораторията"""
    TOOL_NAME = "orbitlab"
    TOOL_VERSION = "0.4.0"

    # guard битове над точността нужна за най-финия мащаб
    GUARD_BITS = _env_int("ORBITLAB_GUARD_BITS", 32)
    SEED = _env_int("ORBITLAB_SEED", 20190101)
    OUT_DIR = os.environ.get("ORBITLAB_OUT") or "out"
    LOG_LEVEL = os.environ.get("ORBITLAB_LOG_LEVEL") or "INFO"

    # над този брой кортежи dioph отказва без --force
    ENUM_BUDGET = _env_int("ORBITLAB_ENUM_BUDGET", 10**8)
    DIOPH_FRAC_BITS = 64
    # до тази дължина x_{L_i} се чете директно от орбитата
    RETURN_DIRECT_LIMIT = 1 << 22
    SCREEN_BOUND = 20

    ORACLE_FILE = "oracles/registered.json"

    # мащаби за verify-all
    VERIFY_STEPS = 10**6
    VERIFY_DENSITY_STEPS = (10**5, 10**6)
    VERIFY_CYCLE_SCALES = (2**6, 2**7, 2**8, 2**9, 2**10)
    VERIFY_DIRICHLET_S = 500
    VERIFY_DIRICHLET_PAIRS = 20
    VERIFY_FIT_RANGE = (32, 4096)
    VERIFY_CF_S = 10**4
    VERIFY_BUILDERS = 100
    VERIFY_RETURN_DEPTH = 15
    VERIFY_AVOID_EPS = ("0.05", "0.1")
    VERIFY_COMPLEXITY_WINDOW = 10**5
    VERIFY_COMPARE_S = 1000
    VERIFY_DIM_LADDER = tuple(2**j for j in range(3, 11))


class QuickConfig(Config):
    """desk мащаб за тестовете и verify-all --quick"""
    VERIFY_STEPS = 2 * 10**4
    VERIFY_DENSITY_STEPS = (10**4, 4 * 10**4)
    VERIFY_CYCLE_SCALES = (2**6, 2**7)
    VERIFY_DIRICHLET_S = 60
    VERIFY_DIRICHLET_PAIRS = 4
    VERIFY_FIT_RANGE = (16, 512)
    VERIFY_CF_S = 2000
    VERIFY_BUILDERS = 10
    VERIFY_RETURN_DEPTH = 10
    VERIFY_COMPLEXITY_WINDOW = 10**4
    VERIFY_COMPARE_S = 120
    VERIFY_DIM_LADDER = tuple(2**j for j in range(3, 8))


class FullConfig(Config):
    """пълният мащаб на acceptance матрицата"""


# удобна карта за избор на конфигурация
config = {
    "quick": QuickConfig,
    "full": FullConfig,
    "default": FullConfig,
}
