import sys


def pytest_terminal_summary(terminalreporter):
    """Re-emit the acceptance scoreboard where capture cannot swallow it."""
    for name, mod in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance" and hasattr(mod, "RESULTS"):
            if mod.RESULTS:
                terminalreporter.section("acceptance criteria")
                for line in sorted(mod.RESULTS):
                    terminalreporter.write_line(line)
            return
