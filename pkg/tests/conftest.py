"""Shared fixtures and the acceptance summary printed at the end of the session."""

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
