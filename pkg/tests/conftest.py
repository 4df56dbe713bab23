"""Shared pytest wiring: surfaces the acceptance checklist in the summary."""

acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance checklist")
    for line in acceptance_lines:
        terminalreporter.write_line(line)
