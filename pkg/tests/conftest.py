import pytest

from bstspan.exactdist import build_tables


@pytest.fixture(scope="session")
def small_tables():
    """X and Y tables covering every (n, p) with p <= n <= 12 and p <= 4."""
    return build_tables(12, 4)


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
