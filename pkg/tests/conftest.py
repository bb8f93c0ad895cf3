import pytest

from crystalpaths.rmatrix import clear_memo


@pytest.fixture
def fresh_memo():
    clear_memo()
    yield
    clear_memo()


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call" and outcome != "error":
                continue
            name = nodeid.split("::")[-1]
            num = int(name.split("_")[2])
            title = dict(rep.user_properties).get("title", name)
            lines.append((num, f"criterion {num:2d} {'PASS' if outcome == 'passed' else 'FAIL'}: {title}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
