"""Acceptance gate: runs every criterion once at its stated tolerance and
prints one pass/fail line per criterion."""

import pytest

from kreinkit import acceptance

CRITERION_IDS = [str(i) for i in range(1, 11)]


@pytest.fixture(scope="module")
def selftest_report():
    return acceptance.run_selftest()


def _find(report, cid):
    for entry in report["criteria"]:
        if entry["id"] == cid:
            return entry
    raise AssertionError(f"criterion {cid} missing from the selftest report")


@pytest.mark.parametrize("cid", CRITERION_IDS)
def test_criterion(selftest_report, cid):
    entry = _find(selftest_report, cid)
    verdict = "PASS" if entry["passed"] else "FAIL"
    print(f"[{verdict}] criterion {cid}: {entry['description']} "
          f"({entry['elapsed_seconds']:.2f}s)")
    assert entry["passed"], entry["details"]


def test_all_criteria_green(selftest_report):
    assert selftest_report["all_passed"]
    assert selftest_report["elapsed_seconds"] < 60.0
