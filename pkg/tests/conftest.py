import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from projpairs.groups import set_order_cap  # noqa: E402

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.fixture(autouse=True)
def _reset_cap():
    yield
    set_order_cap(None)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        status, text = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {status} - {text}")
