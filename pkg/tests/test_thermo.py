import numpy as np
import pytest

from qfg import fixture_path
from qfg.statemodel import StateFormatError
from qfg.thermo import ThermoError, ThermoFamily, family_from_dict, first_law, load_family, temperatures

DT = 1e-3


def random_family(rng, sectors=None, degree=2):
    n = sectors or int(rng.integers(1, 4))
    levels = [int(rng.integers(2, 4)) for _ in range(n)]
    coef = lambda: rng.normal(scale=0.5, size=degree + 1)  # noqa: E731
    return ThermoFamily.polynomial(
        [coef() for _ in range(n)],
        [[coef() for _ in range(k)] for k in levels],
        [[coef() for _ in range(k)] for k in levels],
    )


def test_constant_family_has_zero_deltas():
    fam = ThermoFamily.constant([0.4, 0.6], [[0.5, 0.5], [0.1, 0.9]], [[0.0, 1.0], [0.3, 2.0]])
    r = first_law(fam, 0.5, DT)
    assert r.dU == r.dQ == r.dW == r.dS_fg == 0.0
    t = temperatures(fam, 0.5, DT)
    assert t.T_classical is None and t.T_quantum is None and all(x is None for x in t.T_fg)


def test_scaled_energies_do_work_only():
    p, lam, e0 = np.array([0.3, 0.7]), [np.array([0.2, 0.8]), np.array([0.6, 0.4])], [np.array([0.5, 1.5]), np.array([-1.0, 2.0])]
    fam = ThermoFamily(lambda t: p, lambda t: lam, lambda t: [x * (1 + t) for x in e0])
    t = 0.4
    r = first_law(fam, t, DT)
    u0 = sum(pi * np.dot(l, x) for pi, l, x in zip(p, lam, e0))
    assert abs(r.dQ) < 1e-15
    assert abs(r.dW - u0 * DT) < 1e-12
    assert abs(r.dW - r.U * DT / (1 + t)) < 1e-12


def test_linear_weights_classical_heat():
    e = [np.array([0.0, 2.0]), np.array([1.0, 3.0])]
    lam = [np.array([0.25, 0.75]), np.array([0.5, 0.5])]
    fam = ThermoFamily(lambda t: np.array([t, 1 - t]), lambda t: lam, lambda t: e)
    r = first_law(fam, 0.3, DT)
    e1, e2 = np.dot(lam[0], e[0]), np.dot(lam[1], e[1])
    assert abs(r.dQ_classical - (e1 - e2) * DT) < 1e-8
    assert r.dQ_fg == (0.0, 0.0) and r.dW == 0.0


def test_gibbs_recovers_temperature():
    fam = ThermoFamily.gibbs([0.0, 1.0])
    for t in (0.5, 1.0, 2.0, 5.0):
        r = temperatures(fam, t, 1e-4)
        assert abs(r.T_fg[0] - t) / t < 0.05
        assert abs(r.T_fg[0] - t) / t < 1e-6


def test_pure_family_limit():
    fam = ThermoFamily.gibbs([0.0, 0.7, 1.3])
    for t in (0.4, 1.1):
        r = temperatures(fam, t, DT)
        assert r.T_classical is None
        assert abs(r.T_quantum - r.T_fg[0]) < 1e-8


def test_frozen_sector_limit():
    rng = np.random.default_rng(31)
    for _ in range(20):
        base = random_family(rng, sectors=3)
        lam = base.sample(0.0).lam  # occupations held fixed: no fine-grained heat
        fam = ThermoFamily(lambda t: base.sample(t).p, lambda t: lam, lambda t: base.sample(t).e)
        r = temperatures(fam, 0.2, DT, coarse_grained=True)
        assert r.dQ_fg == (0.0, 0.0, 0.0)
        assert abs(r.T_quantum - r.T_classical) < 1e-8


def test_frozen_occupations_and_entropies():
    lam = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    e = [np.array([0.0, 1.0]), np.array([2.0, 5.0])]
    fam = ThermoFamily(lambda t: np.array([0.2 + t, 0.8 - t]), lambda t: lam, lambda t: e)
    r = temperatures(fam, 0.1, DT)
    assert abs(r.T_quantum - r.T_classical) < 1e-8


def test_first_law_on_random_polynomial_families():
    rng = np.random.default_rng(32)
    for _ in range(100):
        fam = random_family(rng)
        t = float(rng.uniform(-1, 1))
        r = first_law(fam, t, DT)
        assert abs(r.residual) <= 10 * DT**2 + 1e-10


def test_expanded_form_matches_primitive():
    rng = np.random.default_rng(33)
    checked = 0
    # the two forms differ by O(dt^2) product-rule terms, so use a fine stencil
    for _ in range(100):
        r = temperatures(random_family(rng), float(rng.uniform(-1, 1)), 1e-5)
        if r.T_quantum is not None and r.T_quantum_expanded is not None and abs(r.dS_fg) > 1e-7:
            assert abs(r.T_quantum - r.T_quantum_expanded) < 1e-8 * max(1.0, abs(r.T_quantum))
            checked += 1
    assert checked > 50


def test_reparameterization_invariance():
    rng = np.random.default_rng(34)
    for _ in range(20):
        fam = random_family(rng)
        t = float(rng.uniform(-0.5, 0.5))
        # the slower family at 2t with the same step sees every delta halved
        a = temperatures(fam, t, 1e-5)
        b = temperatures(fam.reparameterized(0.5), 2 * t, 1e-5)
        assert abs(b.dQ - a.dQ / 2) < 1e-12
        pairs = [(a.T_classical, b.T_classical, a.dS_classical), (a.T_quantum, b.T_quantum, a.dS_fg)]
        for x, y, ds in pairs + list(zip(a.T_fg, b.T_fg, a.dS_fg_sector)):
            # entropy slopes below 1e-2 lose digits to cancellation in the difference
            if x is not None and y is not None and abs(ds) >= 1e-2 * 1e-5:
                assert abs(x - y) < 1e-8 * max(1.0, abs(x))


def test_invalid_families():
    with pytest.raises(ThermoError):
        first_law(ThermoFamily.constant([0.5, 0.6], [[1.0], [1.0]], [[0.0], [0.0]]), 0.0, DT)
    with pytest.raises(ThermoError):
        first_law(ThermoFamily.constant([1.0], [[0.5, 0.5]], [[0.0]]), 0.0, DT)
    with pytest.raises(ThermoError):
        first_law(ThermoFamily.constant([1.0], [[1.0]], [[np.inf]]), 0.0, DT)
    with pytest.raises(ThermoError):
        first_law(ThermoFamily.gibbs([0.0, 1.0]), 0.0, DT)
    with pytest.raises(ThermoError):
        first_law(ThermoFamily.gibbs([0.0, 1.0]), 1.0, 0.0)


def test_family_files():
    for name in ("gibbs_two_level", "polynomial_two_sector", "table_one_sector"):
        fam = load_family(fixture_path(f"{name}.family"))
        first_law(fam, 1.0, DT)
    table = load_family(fixture_path("table_one_sector.family"))
    with pytest.raises(ThermoError):
        table.sample(3.0)
    for bad in ({}, {"kind": "magic"}, {"kind": "gibbs"}, {"kind": "table", "t": [0.0], "p": [[1]], "lambda": [[[1]]], "energies": [[[0]]]}):
        with pytest.raises(StateFormatError):
            family_from_dict(bad)
