import numpy as np
import pytest

from qfg import properties
from qfg.properties import SUITES, conditional_ssa_search, instance_rng, random_tree, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    r = run_suite(name, instances=40, seed=11)
    assert r.ok, r.first_failure
    assert r.passed == 40


def test_suite_results_are_seed_deterministic():
    a = [instance_rng("x", 3, i).random() for i in range(5)]
    b = [instance_rng("x", 3, i).random() for i in range(5)]
    assert a == b
    assert instance_rng("x", 3, 0).random() != instance_rng("y", 3, 0).random()
    assert instance_rng("x", 3, 0).random() != instance_rng("x", 4, 0).random()


def test_failures_are_counted(monkeypatch):
    monkeypatch.setitem(SUITES, "broken", lambda rng: "always" if rng.random() < 2 else None)
    r = run_suite("broken", instances=3)
    assert (r.passed, r.failed) == (0, 3) and r.first_failure == "instance 0: always"


def test_crash_counts_as_failure(monkeypatch):
    def boom(rng):
        raise FloatingPointError("nan")

    monkeypatch.setitem(SUITES, "crash", boom)
    r = run_suite("crash", instances=2)
    assert r.failed == 2 and "FloatingPointError" in r.first_failure


def test_suites_catch_a_wrong_entropy(monkeypatch):
    monkeypatch.setattr(properties, "qfg_entropy", lambda *a, **k: -1.0)
    assert not run_suite("qfg_nonnegativity", instances=3).ok


def test_random_trees_are_valid():
    from qfg.statemodel import flatten

    for i in range(30):
        rng = np.random.default_rng(i)
        rho = flatten(random_tree((2, 3), rng))
        assert abs(np.trace(rho) - 1) < 1e-10
        assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_conditional_ssa_report():
    r = conditional_ssa_search(instances=20, seed=2)
    assert r.instances == 20 and 0 <= r.violations <= 20
    assert r.as_dict()["instances"] == 20
