from __future__ import annotations

import numpy as np
import pytest

from laborvalue import build_operators, load_reference_economy

# Filled by test_acceptance.py; echoed in the terminal summary.
ACCEPTANCE: list[tuple[int, str, bool, str]] = []

REFERENCE_C = np.array([1.0, 1.7868, 1.0902])


@pytest.fixture(scope="session")
def econ():
    return load_reference_economy()


@pytest.fixture(scope="session")
def ops(econ):
    return build_operators(econ)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}"
        if not ok and detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
