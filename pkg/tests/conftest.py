import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURE_DIR = Path(__file__).parent / "fixtures"

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Log one acceptance line; call it before asserting so failures are reported too."""

    def _record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[criterion])
        return ok

    return _record


@pytest.fixture(scope="session")
def calibration():
    from fplab.calibration import load_fixture

    return load_fixture(FIXTURE_DIR / "calibration.json")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[key])
