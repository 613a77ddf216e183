import sys

from hypothesis import settings

# numerical kernels have data-dependent cost; correctness, not latency, is under test
settings.register_profile("numeric", deadline=None, print_blob=True)
settings.load_profile("numeric")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
