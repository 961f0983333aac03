import warnings

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_configure(config):
    warnings.filterwarnings("error", category=RuntimeWarning, module="qvortex")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
