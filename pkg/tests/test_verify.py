import pytest

from twoquadrics import verify


def test_parallel_matches_serial():
    inst = verify.random_instances(4, 20, seed=3)
    assert verify.run_identities(4, inst, 2) == verify.run_identities(4, inst, 1)


def test_exhaustive_n2_passes():
    report = verify.identity_suite(2)
    assert report.passed
    assert all(c.computed == 0 for c in report.checks)


def test_worker_env(monkeypatch):
    monkeypatch.setenv(verify.WORKERS_ENV, "3")
    assert verify.worker_count() == 3
    monkeypatch.setenv(verify.WORKERS_ENV, "many")
    assert verify.worker_count() == 1


def test_run_suite_errors():
    with pytest.raises(KeyError):
        verify.run_suite(2, "nope")
    with pytest.raises(ValueError):
        verify.run_suite(3, "lattice")
    with pytest.raises(ValueError):
        verify.run_suite(10, "lattice")


@pytest.mark.parametrize("suite", verify.SUITES)
def test_suites_pass_n2(suite):
    report = verify.run_suite(2, suite)
    assert report.passed, [c.check_id for c in report.checks if not c.passed]
    assert report.to_json()["schema"] == 1


def test_failed_check_reported():
    r = verify.Report(2, "demo")
    r.add("demo.bad", "two is three", 2, 3)
    assert not r.passed and not r.to_json()["pass"]
