"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

_CRITERIA = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    failed = report.failed
    if report.when == "call" or failed:
        prev = _CRITERIA.get(key)
        status = "FAIL" if failed or (prev and prev[0] == "FAIL") else "PASS"
        _CRITERIA[key] = (status, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.split()[0])):
        status, detail = _CRITERIA[key]
        line = f"criterion {key}: {status}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
