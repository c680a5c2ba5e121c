import pytest

from fragalign.running_example import running_example_net, running_example_tree
from fragalign.tree_net import to_wfnet


@pytest.fixture(scope="session")
def hand_net():
    return running_example_net()


@pytest.fixture(scope="session")
def example_tree():
    return running_example_tree()


@pytest.fixture(scope="session")
def example_binding(example_tree):
    return to_wfnet(example_tree)


# -- acceptance report ------------------------------------------------------
# Tests marked ``criterion(n, title)`` are grouped and summarised as one
# PASS/FAIL line per criterion at the end of the run.

_titles: dict = {}
_by_test: dict = {}
_failed: set = set()
_passed: set = set()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            n, title = mark.args
            _titles[n] = title
            _by_test[item.nodeid] = n


def pytest_runtest_logreport(report):
    n = _by_test.get(report.nodeid)
    if n is None:
        return
    if report.failed or report.skipped:
        _failed.add(n)
    elif report.when == "call":
        _passed.add(n)


def pytest_terminal_summary(terminalreporter):
    ran = sorted(_passed | _failed)
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in ran:
        verdict = "PASS" if n in _passed and n not in _failed else "FAIL"
        terminalreporter.write_line(f"{verdict}  [{n}] {_titles[n]}")
