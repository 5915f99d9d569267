"""Shared fixtures plus a one-line-per-criterion summary for the acceptance suite."""

import numpy as np
import pytest

from delegated_contracts import DelegationSetting, binomial_pmf

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number = marker.args[0]
    title = marker.kwargs.get("title", "")
    if report.when == "call" or report.failed:
        prev = _acceptance.get(number)
        passed = report.passed and (prev is None or prev[0])
        _acceptance[number] = (passed, title, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        passed, title, duration = _acceptance[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}  ({duration:.2f} s)")


@pytest.fixture
def counterexample():
    """Binomial(10, p) for p in (0.5, 0.65, 0.8), costs (0, 0.45, 1)."""
    F = [binomial_pmf(10, p).probs for p in (0.5, 0.65, 0.8)]
    return DelegationSetting.from_arrays(F, [0.0, 0.45, 1.0])


@pytest.fixture
def minimal_counterexample():
    F = [[0.5, 0.3, 0.2], [0.3, 0.4, 0.3], [0.1, 0.35, 0.55]]
    return DelegationSetting.from_arrays(F, [0.0, 0.45, 1.0])


@pytest.fixture
def coin_pair():
    return DelegationSetting.from_arrays([[0.75, 0.25], [0.25, 0.75]], [0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
