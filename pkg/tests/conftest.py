import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quadlab.catalog import builtin_knot  # noqa: E402
from quadlab.samples import figure_eight, quadrilateral, trefoil  # noqa: E402

_acceptance = {}


@pytest.fixture(scope="session")
def k6():
    return builtin_knot("k6")


@pytest.fixture(scope="session")
def k14():
    return builtin_knot("k14")


@pytest.fixture(scope="session")
def left_trefoil():
    return trefoil()


@pytest.fixture(scope="session")
def fig8():
    return figure_eight()


@pytest.fixture(scope="session")
def quad4():
    return quadrilateral()


def pytest_runtest_logreport(report):
    marker = "test_acceptance.py::test_criterion_"
    if marker in report.nodeid and report.when == "call":
        number = int(report.nodeid.split(marker)[1].split("_")[0])
        _acceptance.setdefault(number, []).append(
            (report.outcome, report.duration, report.nodeid.split("::")[-1]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        parts = _acceptance[number]
        status = "PASS" if all(outcome == "passed" for outcome, _, _ in parts) else "FAIL"
        failed = [name for outcome, _, name in parts if outcome != "passed"]
        duration = sum(d for _, d, _ in parts)
        detail = f"failed: {', '.join(failed)}" if failed else ", ".join(name for _, _, name in parts)
        terminalreporter.write_line(f"criterion {number}: {status}  ({detail}; {duration:.1f}s)")
