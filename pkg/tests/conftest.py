from __future__ import annotations

import random
from pathlib import Path

import pytest

from nilproj import catalog

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture(scope="session")
def entries():
    return catalog.default_entries()


@pytest.fixture(scope="session")
def heis():
    return catalog.heisenberg()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    # one PASS/FAIL line per acceptance criterion that ran in this session
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(results):
        ok, detail = results[i]
        terminalreporter.write_line(module.format_line(i, ok, detail))
