import random

import pytest
from hypothesis import settings

settings.register_profile("dtl", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("dtl")


@pytest.fixture
def rng():
    return random.Random(1234)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """``criterion(label, ok, detail)`` prints one PASS/FAIL line and returns ``ok``."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(label: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
        lines.append(line)
        print(line)
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
