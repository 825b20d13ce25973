import pytest

from starflow.graph import build_graph

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Append a (name, passed, detail) line to the acceptance summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _criteria.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")


def make_g1(s24=1, caps=None):
    return build_graph(
        [1, 2, 3, 4],
        [(1, 3, 0, 1), (2, 4, s24, 0)],
        [(1, 2, 1, 1), (4, 3, 1, 1)],
        caps or {},
    )


def make_g2():
    return build_graph([1, 2], [], [(1, 2, 1, 1), (2, 1, 1, 2)])


def make_g4():
    return build_graph([1, 2], [(1, 2, 0, 1)], [(1, 2, 1, 1)])


@pytest.fixture
def g1():
    return make_g1()


@pytest.fixture
def g2():
    return make_g2()


@pytest.fixture
def g4():
    return make_g4()
