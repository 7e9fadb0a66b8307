from __future__ import annotations

import re

import pytest

from siteselect.fixtures import fixture_snapshot, write_fixture_bundle

_ACCEPTANCE = re.compile(r"test_acceptance\.py::(?:.*::)?test_(a\d+)")


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call":
        return
    m = _ACCEPTANCE.search(report.nodeid)
    if m:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[{m.group(1).upper()}] {verdict}  {report.nodeid.split('::')[-1]}")


@pytest.fixture(scope="session")
def snap():
    """The in-memory demo snapshot (NRW counties + Gütersloh districts)."""
    return fixture_snapshot()


@pytest.fixture(scope="session")
def fixture_bundle(tmp_path_factory):
    """The demo dataset written out as a loadable bundle; returns its directory."""
    out = tmp_path_factory.mktemp("fixture-bundle")
    write_fixture_bundle(out)
    return out
