import numpy as np
import pytest

from alphabeta.lie import InnerProduct, abelian, aff1, heisenberg3, so3

ACCEPTANCE_LINES = []


@pytest.fixture
def e3():
    return np.array([0.0, 0.0, 1.0])


@pytest.fixture
def ident3():
    return InnerProduct.identity(3)


@pytest.fixture(params=["abelian3", "heisenberg3", "so3", "aff1"])
def catalog_alg(request):
    return {"abelian3": lambda: abelian(3), "heisenberg3": heisenberg3,
            "so3": so3, "aff1": aff1}[request.param]()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
