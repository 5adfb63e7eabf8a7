from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("qmeas", max_examples=40, deadline=None)
settings.load_profile("qmeas")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """``report(number, title, checks, detail)``: log one PASS/FAIL line and assert every check."""
    lines = request.config.stash[_ACCEPTANCE]

    def report(number: int, title: str, checks: dict, detail: str = "") -> None:
        failed = [name for name, ok in checks.items() if not ok]
        line = f"acceptance {number:2d} {'FAIL' if failed else 'PASS'}  {title}"
        if detail:
            line += f"  [{detail}]"
        if failed:
            line += f"  failed: {', '.join(failed)}"
        lines.append(line)
        print(line)
        assert not failed, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
