from __future__ import annotations

from typing import Dict, Tuple

import pytest

from twisted_residue.cli import Session
from twisted_residue.expected import load_expected

CRITERIA: Dict[int, Tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def table():
    return load_expected()


@pytest.fixture(scope="session")
def session(table):
    return Session(table, 4)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, line = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {line}")
