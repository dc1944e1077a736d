import pytest
from click.testing import CliRunner

from config import config
from orbitlab import create_cli
from orbitlab.params.services import ParamService


@pytest.fixture
def F():
    return 64


@pytest.fixture
def pair(F):
    """Λ = {√2, √3} на работната точност."""
    return ParamService.parameter_set(["sqrt(2)", "sqrt(3)"], F)


@pytest.fixture
def sqrt2(F):
    return ParamService.parameter_set(["sqrt(2)"], F)


@pytest.fixture
def quick_cfg():
    return config["quick"]


@pytest.fixture
def cli():
    return create_cli("quick")


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(cli, runner, tmp_path):
    """Пуска команда с --out към временна папка и връща (result, out_dir)."""
    def _invoke(*args):
        out = tmp_path / "out"
        result = runner.invoke(cli, [*args, "--out", str(out)])
        return result, out
    return _invoke
