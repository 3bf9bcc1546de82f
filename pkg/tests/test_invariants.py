import pytest

from geoqm import invariants


@pytest.mark.parametrize("name", sorted(invariants.SUITES))
def test_suite_green_at_3x4(name):
    results = invariants.SUITES[name]((3, 4), seed=1, n_samples=50_000)
    assert results
    failed = [r for r in results if not r.passed]
    assert not failed, failed


def test_run_all_deterministic():
    a = [r.to_json() for r in invariants.run_all((3, 3), seed=2, n_samples=5_000)]
    b = [r.to_json() for r in invariants.run_all((3, 3), seed=2, n_samples=5_000)]
    assert a == b
