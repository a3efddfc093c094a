import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """``acceptance(number, title, ok, detail)`` records one verdict line and asserts it."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number: int, title: str, ok: bool, detail: str):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        lines.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
