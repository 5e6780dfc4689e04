import pytest

from quantvol.harness.fixtures import DATASETS, load_dataset
from quantvol.lattice import LatticePolytope, dual, product, simplex_pn


@pytest.fixture
def p2():
    return LatticePolytope([(2, -1), (-1, 2), (-1, -1)])


@pytest.fixture
def square():
    return LatticePolytope([(1, 1), (1, -1), (-1, 1), (-1, -1)])


@pytest.fixture
def p2_dual(p2):
    return dual(p2)


@pytest.fixture(scope="session")
def bundled():
    return {name: load_dataset(name) for name in DATASETS}


@pytest.fixture(scope="session")
def all_records(bundled):
    return [r for name in DATASETS for r in bundled[name]]


@pytest.fixture(scope="session")
def p1p1():
    return product(simplex_pn(1), simplex_pn(1))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
