import time

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, budget): acceptance criterion with a runtime budget in seconds")


@pytest.fixture
def budget(request):
    """Time the test body and fail it when it overruns the criterion's budget."""
    marker = request.node.get_closest_marker("criterion")
    number, seconds = marker.args
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    _CRITERIA.setdefault(number, {})["elapsed"] = elapsed
    assert elapsed <= seconds, f"criterion {number} took {elapsed:.2f} s (budget {seconds} s)"


def pytest_runtest_logreport(report):
    if not report.nodeid.split("::")[0].endswith("test_acceptance.py"):
        return
    number = _number(report)
    if number is None:
        return
    entry = _CRITERIA.setdefault(number, {})
    entry.setdefault("name", report.nodeid.split("::")[-1])
    if report.failed:
        entry["failed"] = True
    elif report.when == "call" and report.passed:
        entry.setdefault("failed", False)


def _number(report):
    for key in report.keywords:
        if key.startswith("test_criterion_"):
            return int(key.split("_")[2])
    return None


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry.get("failed", True) else "PASS"
        took = f"{entry['elapsed']:.2f} s" if "elapsed" in entry else "n/a"
        terminalreporter.write_line(f"criterion {number}: {status}  ({took})  {entry.get('name', '')}")
