import pytest

_ACCEPTANCE = []


class Criterion:
    """Records the outcome of one acceptance criterion for the summary."""

    def __init__(self, capsys):
        self._capsys = capsys

    def report(self, number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title} ({detail})"
        _ACCEPTANCE.append((number, line))
        with self._capsys.disabled():
            print("\n" + line)
        assert passed, line


@pytest.fixture
def criterion(capsys):
    return Criterion(capsys)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
