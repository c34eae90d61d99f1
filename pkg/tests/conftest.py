import json

import pytest

from pinwheels import cli


@pytest.fixture(scope="session")
def default_pinwheel_run(tmp_path_factory):
    """One default ``pinwheel`` run shared by the CLI and acceptance tests."""
    out = tmp_path_factory.mktemp("pinwheel_default")
    code = cli.main(["pinwheel", "--out", str(out)])
    assert code == 0
    return out, json.loads((out / "summary.json").read_text())


_CRITERIA = {}


@pytest.fixture
def criterion_line():
    """Print and record one PASS/FAIL line per acceptance criterion."""

    def emit(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail}"
        print(line)
        _CRITERIA[number] = line
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
