import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dcsbm_tw.tracy_widom import default_table  # noqa: E402

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def tw():
    return default_table()


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one ``PASS``/``FAIL`` line per acceptance criterion."""

    def record(label, ok, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        print(_ACCEPTANCE_LINES[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
