import sys


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts are printed inside the tests, which -v captures;
    # echo them here so they always land in the run transcript
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for line in verdicts:
        terminalreporter.write_line(line)
