ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, passed: bool, text: str) -> bool:
    line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
