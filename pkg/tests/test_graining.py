import numpy as np
from hypothesis import given, settings, strategies as st

from qfg import graining, linalg, statemodel as sm
from qfg.entropy import qfg_entropy, shannon
from qfg.graining import LocalFormalState
from qfg.properties import random_pure, random_tree

seeds = st.integers(0, 2**32 - 1)


def test_bell_keep_a():
    r = graining.type1_reduce(sm.bell("phi_plus"), "A|B", 0)
    assert isinstance(r, LocalFormalState)
    assert np.allclose(r.term_weights, [0.5, 0.5])
    labels = sorted(tuple(np.round(np.abs(f), 12)) for f in r.factors)
    assert labels == [(0.0, 1.0), (1.0, 0.0)]


def test_w_state_keeps_three_terms():
    r = graining.type1_reduce(sm.w_state(), "A|B|C", 0)
    assert np.allclose(r.term_weights, [1 / 3] * 3)


def test_product_keep_a():
    s = 1 / np.sqrt(2)
    st_ = sm.pure((2, 2), {(0, 0): s, (0, 1): s})
    r = graining.type1_reduce(st_, "A|B", 0)
    assert np.allclose(r.term_weights, [1.0])


def test_mixed_preserves_weights():
    w = sm.werner(0.4)
    r = graining.type1_reduce(w, "A|B", 1)
    assert np.allclose(r.weights, w.weights)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_type1_matches_schmidt(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.choice([2, 3], size=2))
    psi = random_pure(dims, rng, max_terms=9)
    r = graining.type1_reduce(psi, "A|B", int(rng.integers(0, 2)))
    sch = linalg.schmidt_decompose(psi.vector(), dims[0], dims[1], tol=1e-8)
    assert np.allclose(np.sort(r.term_weights), np.sort(sch.coefficients**2), atol=1e-10)


def test_type2_examples():
    s = 1 / np.sqrt(2)
    dec = sm.mixture([0.3, 0.7], [sm.pure((2,), {(0,): 1}), sm.pure((2,), {(0,): s, (1,): s})])
    rel = graining.type2_relabel(dec)
    assert np.allclose(sm.flatten(rel), np.diag([0.3, 0.7]))
    single = graining.type2_relabel(sm.as_decomposition(sm.pure((2,), {(0,): s, (1,): s})))
    assert np.allclose(sm.flatten(single), [[1.0]])


def test_type2_recovers_mixing_entropy():
    lam = 0.2
    dec = sm.mixture([1 - lam, lam], [sm.pure((2,), {(0,): 0.6, (1,): 0.8}), sm.pure((2,), {(0,): 0.8, (1,): -0.6})])
    rel = graining.type2_relabel(dec)
    assert np.allclose(sm.flatten(rel), np.diag([1 - lam, lam]))
    assert abs(qfg_entropy(rel) - shannon([1 - lam, lam])) < 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_type2_diagonal_unit_trace(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 5))
    dec = sm.Decomposition((2,), rng.dirichlet(np.ones(k)), tuple(random_tree((2,), rng, 1) for _ in range(k)))
    m = sm.flatten(graining.type2_relabel(dec))
    assert np.max(np.abs(m - np.diag(np.diag(m)))) < 1e-15
    assert abs(np.trace(m) - 1) < 1e-12


def test_type2_recursive_flag():
    inner = sm.mixture([0.5, 0.5], [sm.pure((2,), {(0,): 1}), sm.pure((2,), {(1,): 1})])
    dec = sm.mixture([0.4, 0.6], [inner, sm.pure((2,), {(0,): 1})])
    top = graining.type2_relabel(dec)
    deep = graining.type2_relabel(dec, recursive=True)
    assert np.allclose(sm.flatten(top), np.diag([0.4, 0.6]))
    assert np.allclose(sm.flatten(deep), np.diag([0.2, 0.2, 0.6]))


def test_trace_reduce_examples():
    assert np.allclose(graining.trace_reduce(sm.bell("phi_plus"), [0]), np.eye(2) / 2)
    assert np.allclose(graining.trace_reduce(sm.two_atom(), [0]), np.eye(2) / 2)
    assert np.allclose(graining.trace_reduce(sm.two_atom(), [1]), np.eye(2) / 2)
    rng = np.random.default_rng(9)
    a = linalg.random_density(2, rng)
    p = sm.product(sm.OpaqueSector((2,), a), sm.pure((3,), {(1,): 1}))
    assert np.allclose(graining.trace_reduce(p, [0]), a, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_product_type1_agrees_with_trace(seed):
    rng = np.random.default_rng(seed)
    a = random_tree((2,), rng)
    b = random_tree((3,), rng)
    p = sm.product(a, b)
    for keep in (0, 1):
        reduced = graining.flatten_reduced(graining.type1_reduce(p, "A|B", keep))
        assert np.max(np.abs(reduced - graining.trace_reduce(p, [keep]))) < 1e-12
