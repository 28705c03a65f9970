import pytest

from conftest import spec_path
from equivect.checks import run_checks
from equivect.config import Settings
from equivect.spec_io import load_spec, rep_matrices

SETTINGS = Settings(samples=600, max_rank=2)


def by_name(out):
    return {c["check"]: c for c in out["checks"]}


@pytest.mark.parametrize("name", ["z1", "z3", "z5"])
def test_odd_cyclic_suite(context, name):
    out = run_checks(context(name), settings=SETTINGS)
    assert out["ok"], [c for c in out["checks"] if not c["ok"]]
    assert "skipped" not in by_name(out)["clutching"]


@pytest.mark.parametrize("name", ["z4", "d3", "d4", "tetra", "d3_over_z3"])
def test_suite_outside_twin_regime(context, name):
    out = run_checks(context(name), settings=SETTINGS)
    assert out["ok"], [c for c in out["checks"] if not c["ok"]]
    checks = by_name(out)
    assert checks["clutching"]["skipped"]
    assert checks["line-bundles"]["skipped"]


def test_degree_two_suite(context):
    mats = rep_matrices(load_spec(spec_path("q8xz3")))
    out = run_checks(context("q8xz3", chi=4), mats, SETTINGS)
    assert out["ok"], [c for c in out["checks"] if not c["ok"]]
    assert len(out["checks"]) == 10


def test_failures_are_reported_not_raised(context):
    # a degree-two character without its representation cannot build clutching maps
    out = run_checks(context("q8xz3", chi=4), None, SETTINGS)
    assert not out["ok"]
    failed = [c for c in out["checks"] if not c["ok"]]
    assert [c["check"] for c in failed] == ["clutching"]
    assert failed[0]["failures"][0].startswith("InvalidSpecError")


def test_linear_chi_ignores_degree_two_matrices(context):
    mats = rep_matrices(load_spec(spec_path("q8xz3")))
    out = run_checks(context("q8xz3", chi=0), mats, SETTINGS)
    assert out["ok"], [c for c in out["checks"] if not c["ok"]]
