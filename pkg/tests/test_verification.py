import pytest

import verification
from services.errors import InvalidInputError, VerificationFailureError


def test_tables_suite_passes():
    results = verification.tables_suite()
    assert results
    assert all(result.passed for result in results), [r for r in results if not r.passed]
    names = {result.name for result in results}
    assert {"alpha(0,1,2)", "lambda(0,17)", "exponent slots", "gamma recurrence"} <= names


def test_identities_suite_small_range():
    results = verification.identities_suite(max_n=4)
    assert len(results) == 5 * 3
    assert all(result.passed for result in results)


def test_residuals_suite_small_range():
    results = verification.residuals_suite(max_n=2, max_order=3)
    assert len(results) == 3 * 3 * 2
    assert all(result.passed for result in results)


@pytest.mark.slow
def test_all_suites():
    assert verification.run_suite("all")


def test_run_suite_reports_failures(monkeypatch):
    broken = [verification.CheckResult("tables", "broken literal", False, "1/3 (ожидалось 1/4)")]
    monkeypatch.setitem(verification.SUITES, "tables", lambda: broken)
    with pytest.raises(VerificationFailureError) as info:
        verification.run_suite("tables")
    assert info.value.exit_code == 4
    assert info.value.failures == broken


def test_run_suite_rejects_unknown_name():
    with pytest.raises(InvalidInputError):
        verification.run_suite("everything")
