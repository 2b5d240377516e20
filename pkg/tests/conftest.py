from __future__ import annotations

import pytest

from gridshare import alpha_grid, sweep
from gridshare.data import goals_2014, synthetic_season_2014
from gridshare.weights import EM, RGM

_acceptance_outcomes: dict[str, str] = {}


@pytest.fixture(scope="session")
def table3():
    return goals_2014()


@pytest.fixture(scope="session")
def season2014():
    return synthetic_season_2014()


@pytest.fixture(scope="session")
def sweep2014(table3):
    """Both-method sweep of the bundled dataset on the default grid."""
    return sweep(table3, [EM, RGM], alpha_grid(0.0, 3.0, 0.02))


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_outcomes[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[name].upper()
        terminalreporter.write_line(f"{outcome:7s} {name}")
