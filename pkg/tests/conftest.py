import io

import pytest

from taxosim import load_ic, load_taxonomy, parse_taxonomy
from taxosim.cli import data_dir


@pytest.fixture(scope="session")
def data():
    return data_dir()


@pytest.fixture(scope="session")
def veh(data):
    return load_taxonomy(data / "vehicles.tax")


@pytest.fixture(scope="session")
def veh_ic(data, veh):
    with open(data / "vehicles.ic", encoding="utf-8") as fh:
        return load_ic(fh, veh)


@pytest.fixture(scope="session")
def stoves(data):
    return load_taxonomy(data / "stoves.tax")


@pytest.fixture(scope="session")
def ratings_path(data):
    return data / "miller-charles-30.tsv"


def tax(text, **kw):
    return parse_taxonomy(io.StringIO(text), **kw)


@pytest.fixture
def diamond():
    # root -> a, root -> b, a -> c, b -> c, plus the longer chain a -> m -> c
    return tax(
        "node root\nnode a\nnode b\nnode m\nnode c\n"
        "edge a root isa\nedge b root isa\nedge c a isa\nedge c b isa\n"
        "edge m a isa\nedge c m isa\n"
    )


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
