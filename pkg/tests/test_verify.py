"""Tests for the identity-suite runner: registry, determinism, report
shape, negative-control inversion, and the thread-count environment knob."""

import json

import pytest

from qnls import verify


EXPECTED_SUITES = {
    "daha_dunkl",
    "daha_integral",
    "intertwine",
    "recursion",
    "weyl_action",
    "eigen",
    "creation_commutation",
    "yang_baxter",
    "adjointness",
    "aba_expansion",
    "appendix_b",
    "helmholtz_jump",
    "symmetric_layer",
    "experimental_full_space",
}

# Cheap (dimension, points) settings used when sweeping every suite.
QUICK_SETTINGS = {
    "daha_dunkl": 2,
    "daha_integral": 2,
    "intertwine": 2,
    "recursion": 2,
    "weyl_action": 2,
    "eigen": 2,
    "creation_commutation": 1,
    "yang_baxter": 1,
    "adjointness": 1,
    "aba_expansion": 1,
    "appendix_b": 2,
    "helmholtz_jump": 2,
    "symmetric_layer": 1,
    "experimental_full_space": 1,
}


def test_registry_names():
    assert set(verify.SUITE_NAMES) == EXPECTED_SUITES
    assert len(verify.SUITE_NAMES) == 14


def test_unknown_suite_raises_with_known_names():
    with pytest.raises(ValueError, match="unknown suite"):
        verify.run_suite("no_such_suite")
    try:
        verify.run_suite("no_such_suite")
    except ValueError as exc:
        assert "eigen" in str(exc)


def test_argument_validation():
    with pytest.raises(ValueError, match="points"):
        verify.run_suite("eigen", points=0)
    with pytest.raises(ValueError, match="dimension"):
        verify.run_suite("daha_dunkl", dimension=1)


@pytest.mark.parametrize("name", sorted(EXPECTED_SUITES))
def test_every_suite_passes_and_has_negative_control(name):
    report = verify.run_suite(name, dimension=QUICK_SETTINGS[name], points=1)
    assert report.passed
    assert report.suite_name == name
    ids = [c.identity_id for c in report.checks]
    assert any(i.startswith("negative_control__") for i in ids)
    assert all(c.status == "exact-pass" for c in report.checks)
    # Parameter points record the run configuration.
    assert report.parameter_points[0]["point"] == 0
    assert report.parameter_points[0]["dimension"] == QUICK_SETTINGS[name]


def test_reports_bit_identical_per_seed():
    a = verify.run_suite("eigen", dimension=2, seed=5, points=2)
    b = verify.run_suite("eigen", dimension=2, seed=5, points=2)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(
        b.to_json(), sort_keys=True
    )
    c = verify.run_suite("eigen", dimension=2, seed=6, points=2)
    assert a.to_json()["parameter_points"] != c.to_json()["parameter_points"]


def test_report_json_shape():
    report = verify.run_suite("weyl_action", dimension=2, points=1, seed=1)
    data = report.to_json()
    assert set(data) == {"suite_name", "seed", "passed", "parameter_points", "checks"}
    assert data["passed"] is True
    assert data["seed"] == 1
    for check in data["checks"]:
        assert check["status"] == "exact-pass"
        assert "witness" not in check
    # Checks come back sorted by identifier.
    ids = [check["identity_id"] for check in data["checks"]]
    assert ids == sorted(ids)


def test_thread_count_does_not_change_report(monkeypatch):
    monkeypatch.delenv("HECKE_QNLS_THREADS", raising=False)
    base = verify.run_suite("eigen", dimension=2, points=1, seed=2).to_json()
    monkeypatch.setenv("HECKE_QNLS_THREADS", "2")
    threaded = verify.run_suite("eigen", dimension=2, points=1, seed=2).to_json()
    assert base == threaded


def test_thread_count_env_validation(monkeypatch):
    monkeypatch.setenv("HECKE_QNLS_THREADS", "zero")
    with pytest.raises(ValueError, match="HECKE_QNLS_THREADS"):
        verify.run_suite("eigen", dimension=2, points=1)
    monkeypatch.setenv("HECKE_QNLS_THREADS", "0")
    with pytest.raises(ValueError, match="HECKE_QNLS_THREADS"):
        verify.run_suite("eigen", dimension=2, points=1)
