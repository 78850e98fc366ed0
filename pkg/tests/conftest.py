from __future__ import annotations

import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

# first calls pay for JIT compilation, so per-example deadlines are meaningless
settings.register_profile("fedcount", deadline=None, derandomize=True)
settings.load_profile("fedcount")

# criterion number -> (title, passed, seconds)
ACCEPTANCE: dict[int, tuple[str, bool, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running optional check (set FEDCOUNT_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FEDCOUNT_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="optional long run; set FEDCOUNT_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, secs = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f} s)")
