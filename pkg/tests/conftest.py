import pytest

from oracles import ring_with


@pytest.fixture
def counterexample_ring():
    # K[x1, y1] / (x1 y1^2)
    return ring_with(1, 1, lambda x, y: [x * y * y])


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance.py::" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::", 1)[1]
            if name.startswith("test_criterion["):
                k = int(name[len("test_criterion["):-1])
            elif name.startswith("test_criterion_11"):
                k = 11
            else:
                continue
            lines.append((k, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for k, verdict in sorted(lines):
            terminalreporter.write_line(f"criterion {k}: {verdict}")
