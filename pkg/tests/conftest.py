import pytest

from fsig import make_ring, parse_poly

ACCEPTANCE_LINES = []


@pytest.fixture
def std3():
    def build(p):
        return make_ring(p, [("x", 1), ("y", 1), ("z", 1)])

    return build


@pytest.fixture
def a1_ring3():
    ring = make_ring(3, [("x", 1), ("y", 1), ("z", 1)], [2])
    return ring, parse_poly("x^2+y^2+z^2", ring)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
