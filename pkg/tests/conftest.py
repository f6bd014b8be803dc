import pytest

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def criterion():
    """Record one acceptance criterion's outcome; the line is printed at the end of the run."""

    def report(num, passed, detail):
        ACCEPTANCE[num] = (bool(passed), detail)
        print(f"criterion {num:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        assert passed, detail

    return report
