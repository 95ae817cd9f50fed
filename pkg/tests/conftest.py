import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = {}


class Recorder:
    def __init__(self, store):
        self.store = store
        self.number = None

    def __call__(self, number, ok, detail=""):
        self.number = number
        self.store[number] = (bool(ok), detail)
        line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        return ok


@pytest.fixture
def criterion(request):
    rec = Recorder(_RESULTS)
    yield rec
    number = getattr(request.node.function, "criterion", None)
    if number is not None and number not in _RESULTS:
        _RESULTS[number] = (False, "raised before reaching a verdict")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
