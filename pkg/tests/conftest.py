"""Shared pytest wiring: the acceptance verdict banner."""

ACCEPTANCE_RESULTS = []


def record(label, verdict):
    ACCEPTANCE_RESULTS.append((label, verdict))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{label}: {verdict}")
