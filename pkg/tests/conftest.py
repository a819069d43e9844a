import numpy as np
import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by a test")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def _entry(number, title):
    return _criteria.setdefault(number, {"title": title, "passed": 0, "failed": [], "skipped": [], "notes": []})


@pytest.fixture
def criterion_note(request):
    """Attach a line of reported (not asserted) output to the criterion summary."""
    marker = request.node.get_closest_marker("criterion")
    entry = _entry(*marker.args) if marker is not None else {"notes": []}
    return entry["notes"].append


def _reason(report):
    if isinstance(report.longrepr, tuple):
        return str(report.longrepr[-1]).removeprefix("Skipped: ")
    crash = getattr(report.longrepr, "reprcrash", None)
    return crash.message.splitlines()[0] if crash is not None else ""


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    entry = _entry(*marker)
    if report.skipped:
        entry["skipped"].append(_reason(report))
    elif report.failed:
        entry["failed"].append(f"{report.nodeid.split('::')[-1]}: {_reason(report)}")
    elif report.when == "call":
        entry["passed"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        if entry["failed"]:
            outcome, details = "FAIL", entry["failed"]
        elif entry["passed"]:
            outcome = "PASS"
            details = [f"{len(entry['skipped'])} skipped: {r}" for r in entry["skipped"][:1]]
        else:
            outcome, details = "SKIP", entry["skipped"][:1]
        line = f"criterion {number}: {outcome:4s}  {entry['title']}"
        if details:
            line += "  (" + "; ".join(details) + ")"
        terminalreporter.write_line(line)
        for note in entry["notes"]:
            terminalreporter.write_line(f"    {note}")
