"""Shared fixtures and the acceptance summary printed at the end of a run."""

import pytest

# criterion -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(criterion, passed, detail):
        ACCEPTANCE[criterion] = (bool(passed), detail)
        return passed

    return _record


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" or not report.failed:
        return
    key = mark.args[0]
    _, detail = ACCEPTANCE.get(key, (False, ""))
    reason = str(call.excinfo.value).splitlines()[0] if call.excinfo else "failed"
    ACCEPTANCE[key] = (False, f"{detail} [{call.excinfo.typename if call.excinfo else ''}: {reason}]".strip())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    # parts such as "5a" and "5b" fold into one line for criterion 5
    merged = {}
    for key in sorted(ACCEPTANCE):
        num = int(key.rstrip("abcdefgh"))
        passed, detail = ACCEPTANCE[key]
        ok, parts = merged.get(num, (True, []))
        merged[num] = (ok and passed, parts + [f"({key[len(str(num)):]}) {detail}" if key != str(num) else detail])
    terminalreporter.section("acceptance criteria")
    for num in sorted(merged):
        ok, parts = merged[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {'; '.join(parts)}")
