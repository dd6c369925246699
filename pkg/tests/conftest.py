from __future__ import annotations

import pytest
from hypothesis import settings

from acceptance_log import RESULTS

# sympy oracles are slow on first use
settings.register_profile("default", deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])


@pytest.fixture
def record():
    def _record(key: str, ok: bool, detail: str) -> None:
        RESULTS[key] = f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(RESULTS[key])

    return _record
