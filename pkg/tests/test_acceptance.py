"""Acceptance criteria 1-13, one test each.

A summary line per criterion is printed at the end of the pytest run.
Criterion 13 is report-only: it prints its comparison and asserts nothing
numeric.
"""
import math
import time

import numpy as np
import pytest

import oracles
from qfg import fixture_path, graining, linalg, statemodel as sm
from qfg.channels import (
    ClassicalChannel,
    InputEnsemble,
    additivity_report,
    amplitude_damping,
    classical_capacity,
    depolarizing,
    holevo_quantity,
    identity_channel,
    qfg_q_value,
    qfg_quantum_capacity,
)
from qfg.entanglement import eof_numeric, eof_wootters, quantum_discord, quantum_part_given_decomposition, teleportation_ledger
from qfg.entropy import (
    binary_entropy,
    qfg_conditional,
    qfg_entropy,
    qfg_mutual_information,
    shannon,
    vn_mutual_conditional,
    von_neumann,
)
from qfg.properties import SUITES, run_suite
from qfg.thermo import ThermoFamily, first_law, temperatures

TOL = 1e-9
LOG3 = math.log2(3)
acceptance = pytest.mark.acceptance

BIPARTITIONS = ("A|B", "A|C", "B|C", "AB|C", "A|BC", "AC|B")


def _all_values(state, spec):
    p = sm.Partition.parse(spec)
    vals = [qfg_entropy(state, p)] + [qfg_entropy(state, p, keep=k) for k in range(p.m)]
    return vals + [qfg_mutual_information(state, p).total]


@acceptance(1, "GHZ entropies and mutual informations")
def test_criterion_01_ghz():
    for a1sq in (0.5, 0.1, 0.37, 0.8):
        g = sm.ghz(math.sqrt(a1sq), 1j * math.sqrt(1 - a1sq))
        h = binary_entropy(a1sq)
        assert abs(qfg_entropy(g) - h) < TOL
        for spec in (*BIPARTITIONS, "A|B|C"):
            assert all(abs(v - h) < TOL for v in _all_values(g, spec)), spec


@acceptance(2, "W state entropies equal log2(3)")
def test_criterion_02_w_state():
    w = sm.w_state()
    assert all(abs(v - LOG3) < TOL for v in _all_values(w, "A|B|C"))


@acceptance(3, "cluster state cuts AB|CD and AC|BD")
def test_criterion_03_cluster():
    c = sm.load(fixture_path("cluster4.state"))
    assert all(abs(v - 1) < TOL for v in _all_values(c, "AB|CD"))
    assert all(abs(v - 2) < TOL for v in _all_values(c, "AC|BD"))


@acceptance(4, "Bell state entropies and conditional entropies")
def test_criterion_04_bell():
    b = sm.load(fixture_path("bell_psi_plus.state"))
    assert all(abs(v - 1) < TOL for v in _all_values(b, "A|B"))
    assert abs(qfg_conditional(b, "A|B")) < TOL
    assert abs(vn_mutual_conditional(sm.flatten(b), (2, 2))[1] + 1) < TOL


@acceptance(5, "Werner decompositions and closed forms")
def test_criterion_05_werner():
    for z in (0.0, 0.25, 0.5, 0.75, 1.0):
        hz = binary_entropy(z)
        w = sm.werner(z)
        assert abs(qfg_entropy(w) - (hz + 2 - z)) < TOL
        assert abs(qfg_entropy(w, "A|B", keep=0) - (hz + 1)) < TOL
        assert abs(qfg_entropy(w, "A|B", keep=1) - (hz + 1)) < TOL
        r = qfg_mutual_information(w, "A|B")
        assert abs(r.total - (hz + z)) < TOL and abs(r.classical - hz) < TOL and abs(r.quantum - z) < TOL
        fb = sm.werner(z, "four_bell")
        a, b = (1 + 3 * z) / 4, (1 - z) / 4
        assert abs(qfg_entropy(fb) - (1 + shannon([a, b, b, b]))) < TOL
        assert np.abs(sm.flatten(w) - sm.flatten(fb)).max() < 1e-12


@acceptance(6, "two-atom state: type-I reduction and partial trace")
def test_criterion_06_two_atom():
    s = sm.load(fixture_path("two_atom.state"))
    assert all(abs(v - 1) < TOL for v in _all_values(s, "A|B"))
    for k in (0, 1):
        r = graining.type1_reduce(s, "A|B", k)
        r = r.sectors[0] if isinstance(r, sm.Decomposition) else r
        assert isinstance(r, graining.LocalFormalState)
        assert abs(shannon(r.term_weights) - 1) < TOL
        rho = graining.trace_reduce(s, [k])
        assert np.abs(rho - np.eye(2) / 2).max() < TOL
        assert abs(von_neumann(rho) - 1) < TOL


@acceptance(7, "teleportation conserves fine-grained entropy")
def test_criterion_07_teleportation():
    rng = np.random.default_rng(7)
    for _ in range(10):
        v = linalg.random_pure(2, rng)
        r = teleportation_ledger(v[0], v[1])
        want = binary_entropy(abs(v[0]) ** 2) + 2
        assert abs(r.total_before - want) < TOL
        assert all(abs(x - want) < TOL for x in (*r.totals_after_outcome, r.total_after_correction))


@acceptance(8, "property suites, 200 instances each")
def test_criterion_08_property_suites():
    results = [run_suite(name, instances=200, seed=0) for name in SUITES]
    bad = [(r.name, r.failed, r.first_failure) for r in results if not r.ok]
    assert not bad, bad


@acceptance(9, "numerical EoF against the Wootters oracle")
def test_criterion_09_eof():
    start = time.perf_counter()
    states = [linalg.random_density(4, np.random.default_rng(9000 + i)) for i in range(20)]
    states += [sm.flatten(sm.werner(z)) for z in (0.5, 0.8)]
    for rho in states:
        assert abs(eof_numeric(rho) - oracles.wootters_eof(rho)) < 1e-3
    assert time.perf_counter() - start <= 60
    for z in (0.0, 0.3, 0.5, 0.8, 1.0):
        assert quantum_part_given_decomposition(sm.werner(z)) == pytest.approx(z, abs=1e-12)


@acceptance(10, "discord: pure states, CQ states, Werner monotonicity")
def test_criterion_10_discord():
    rng = np.random.default_rng(10)
    for _ in range(5):
        psi = linalg.random_pure(4, rng)
        rho = linalg.projector(psi)
        s_a = oracles.entropy_from_eigvals(oracles.index_partial_trace(rho, [2, 2], [1]))
        assert abs(quantum_discord(rho) - s_a) < 1e-4
    cq = sm.flatten(sm.load(fixture_path("cq_example.state")))
    assert abs(quantum_discord(cq, measured="A")) < 1e-6
    vals = [quantum_discord(sm.flatten(sm.werner(z))) for z in np.linspace(0, 1, 11)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


@acceptance(11, "classical, Holevo and fine-grained quantum capacities")
def test_criterion_11_capacities():
    c = classical_capacity(ClassicalChannel.binary_symmetric(0.11))
    assert abs(c - (1 - oracles.h2(0.11))) < 1e-4
    for i in range(200):
        rng = np.random.default_rng(11000 + i)
        k = int(rng.integers(1, 6))
        w = rng.dirichlet(np.ones(k))
        ens = InputEnsemble(w, [linalg.random_density(2, rng) if rng.random() < 0.5 else linalg.random_pure(2, rng) for _ in range(k)])
        assert abs(holevo_quantity(ens, "qfg") - shannon(w)) < 1e-12
    assert qfg_quantum_capacity(identity_channel()).value >= 1 - 1e-3
    for ch in (identity_channel(), depolarizing(0.3), amplitude_damping(0.5)):
        assert qfg_q_value(ch, np.array([1.0, 0.0])) == 0.0
        assert qfg_q_value(ch, np.array([0.0, 1.0])) == 0.0


def _random_family(rng, n=None):
    n = n or int(rng.integers(1, 4))
    levels = [int(rng.integers(2, 4)) for _ in range(n)]
    c = lambda: rng.normal(scale=0.5, size=3)  # noqa: E731
    return ThermoFamily.polynomial([c() for _ in range(n)], [[c() for _ in range(k)] for k in levels], [[c() for _ in range(k)] for k in levels])


@acceptance(12, "thermodynamic first law and temperature limits")
def test_criterion_12_thermo():
    rng = np.random.default_rng(12)
    dt = 1e-3
    for _ in range(100):
        r = first_law(_random_family(rng), float(rng.uniform(-1, 1)), dt)
        assert abs(r.residual) <= 10 * dt**2 + 1e-10
    for t in (0.5, 1.0, 3.0):
        r = temperatures(ThermoFamily.gibbs([0.0, 1.0]), t, dt)
        assert abs(r.T_quantum - r.T_fg[0]) < 1e-8
    base = _random_family(np.random.default_rng(121), n=3)
    lam = base.sample(0.0).lam
    frozen = ThermoFamily(lambda t: base.sample(t).p, lambda t: lam, lambda t: base.sample(t).e)
    r = temperatures(frozen, 0.3, dt, coarse_grained=True)
    assert abs(r.T_quantum - r.T_classical) < 1e-8
    for t in (0.5, 1.0, 2.0):
        r = temperatures(ThermoFamily.gibbs([0.0, 1.0]), t, 1e-4)
        assert abs(r.T_fg[0] - t) / t < 0.05


@acceptance(13, "report only: capacity additivity and fine-grained EoF vs Wootters")
def test_criterion_13_reports_only(capsys):
    add = additivity_report(depolarizing(0.3), amplitude_damping(0.2))
    z = 0.5
    w = sm.werner(z)
    with capsys.disabled():
        print(f"\n[report] Q additivity: {add.as_dict()}")
        print(f"[report] Werner z={z}: fine-grained quantum part {quantum_part_given_decomposition(w):.6f}, Wootters EoF {eof_wootters(sm.flatten(w)):.6f}")
