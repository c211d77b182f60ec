import sys


def pytest_terminal_summary(terminalreporter):
    """Print one PASS/FAIL line per acceptance criterion that ran."""
    for name, module in list(sys.modules.items()):
        if name.split(".")[-1] == "test_acceptance" and getattr(module, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in module.summary_lines():
                terminalreporter.write_line(line)
            return
