from __future__ import annotations

import os

import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks, enabled with SUPERLR_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SUPERLR_SLOW"):
        return
    skip = pytest.mark.skip(reason="set SUPERLR_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_ACCEPTANCE: dict[str, list] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    entry = _ACCEPTANCE.setdefault(report.nodeid, [None, None])
    if report.failed:
        entry[0] = "FAIL"
    elif report.skipped:
        entry[0] = "SKIP"
    elif report.when == "call" and entry[0] is None:
        entry[0] = "PASS"


def pytest_itemcollected(item):
    if "test_acceptance.py::test_criterion_" in item.nodeid:
        doc = (item.function.__doc__ or "").strip().splitlines()
        _ACCEPTANCE.setdefault(item.nodeid, [None, None])[1] = doc[0] if doc else item.name


def pytest_terminal_summary(terminalreporter):
    ran = {k: v for k, v in _ACCEPTANCE.items() if v[0] and v[1]}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (verdict, label) in ran.items():
        num = nodeid.rsplit("test_criterion_", 1)[1]
        terminalreporter.write_line(f"criterion {num:<6} {verdict:<5} {label}")
