import re

_ACCEPTANCE: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        label = "PASS" if report.outcome == "passed" else report.outcome.upper()
        _ACCEPTANCE[key] = f"criterion {key} ({m.group(2).replace('_', ' ')}): {label}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[key])
