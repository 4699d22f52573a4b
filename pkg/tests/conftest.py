from pathlib import Path

import pytest

from dsr_analyzer.netmodel import parse_network

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name: str):
    return parse_network((FIXTURES / f"{name}.net").read_text(encoding="utf-8"))


@pytest.fixture
def fixture_model():
    return load


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
