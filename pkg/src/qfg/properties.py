"""Seeded randomized invariant suites.

Each check draws one random instance from its own generator and returns
``None`` on success or a short failure description.  Instance ``i`` of suite
``name`` under seed ``s`` always sees the same random stream.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from itertools import product as iproduct
from math import log2, prod
from typing import Callable

import numpy as np

from . import linalg
from .entanglement import MeasurementFamily, measurement_ledger
from .entropy import (
    qfg_conditional,
    qfg_entropy,
    qfg_mutual_information,
    relative_entropy,
    shannon,
    vn_mutual_conditional,
    von_neumann,
)
from .graining import type2_relabel
from .statemodel import (
    Decomposition,
    OpaqueSector,
    ProductSector,
    PureSector,
    Sector,
    flatten,
    product,
)

TOL = 1e-8
DEFAULT_INSTANCES = 200


# ---------------------------------------------------------------------------
# random trees


def random_basis(d: int, rng) -> np.ndarray | None:
    return None if rng.random() < 0.5 else linalg.random_unitary(d, rng)


def random_pure(dims, rng, max_terms: int | None = None, declared: bool = True) -> PureSector:
    labels = list(iproduct(*[range(d) for d in dims]))
    k = int(rng.integers(1, min(len(labels), max_terms or 4) + 1))
    pick = rng.choice(len(labels), size=k, replace=False)
    amps = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    amps /= np.linalg.norm(amps)
    bases = tuple(random_basis(d, rng) for d in dims) if declared else ()
    return PureSector(tuple(dims), tuple(labels[i] for i in sorted(pick)), amps, bases)


def random_separable(dims, rng, terms: int = 2) -> np.ndarray:
    w = rng.dirichlet(np.ones(terms))
    return sum(wi * linalg.tensor_product(*[linalg.random_density(d, rng) for d in dims]) for wi in w)


def random_opaque(dims, rng, separable: bool = True) -> OpaqueSector:
    m = random_separable(dims, rng) if separable else linalg.random_density(prod(dims), rng)
    return OpaqueSector(tuple(dims), m)


def random_tree(dims, rng, depth: int = 2, separable_opaque: bool = True) -> Sector:
    """Random decomposition tree; opaque leaves are separable unless asked otherwise."""
    dims = tuple(dims)
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        return random_pure(dims, rng) if rng.random() < 0.8 else random_opaque(dims, rng, separable_opaque)
    if roll < 0.8 or len(dims) == 1:
        k = int(rng.integers(2, 4))
        w = rng.dirichlet(np.ones(k))
        return Decomposition(dims, w, tuple(random_tree(dims, rng, depth - 1, separable_opaque) for _ in range(k)))
    cut = int(rng.integers(1, len(dims)))
    return product(random_tree(dims[:cut], rng, depth - 1, separable_opaque), random_tree(dims[cut:], rng, depth - 1, separable_opaque))


def random_dims(rng, n: int) -> tuple[int, ...]:
    return tuple(int(d) for d in rng.choice([2, 3], size=n, p=[0.7, 0.3]))


def _close(a: float, b: float, tol: float = TOL) -> bool:
    return abs(a - b) <= tol


# ---------------------------------------------------------------------------
# fine-grained checks


def _all_entropies(state, rng):
    n = len(state.dims)
    out = [qfg_entropy(state)]
    if n >= 2:
        spec = "|".join(chr(65 + i) for i in range(n))
        out += [qfg_entropy(state, spec, keep=k) for k in range(n)]
    return out


def check_qfg_nonnegative(rng):
    s = random_tree(random_dims(rng, int(rng.integers(1, 4))), rng)
    vals = _all_entropies(s, rng)
    if min(vals) < -1e-9:
        return f"negative entropy {min(vals)}"
    if len(s.dims) >= 2:
        r = qfg_mutual_information(s, "|".join(chr(65 + i) for i in range(len(s.dims))))
        if min(r.total, r.classical, r.quantum) < -1e-9:
            return f"negative correlation {r}"
        if abs(r.total - r.classical - r.quantum) > 1e-9:
            return "total != classical + quantum"
    return None


def check_qfg_additivity(rng):
    a = random_tree(random_dims(rng, int(rng.integers(1, 3))), rng)
    b = random_tree(random_dims(rng, int(rng.integers(1, 3))), rng)
    lhs, rhs = qfg_entropy(product(a, b)), qfg_entropy(a) + qfg_entropy(b)
    return None if _close(lhs, rhs, 1e-9) else f"S(a x b)={lhs} but S(a)+S(b)={rhs}"


def check_qfg_concavity(rng):
    dims = random_dims(rng, int(rng.integers(1, 3)))
    k = int(rng.integers(2, 5))
    w = rng.dirichlet(np.ones(k))
    parts = tuple(random_tree(dims, rng, 1) for _ in range(k))
    whole = qfg_entropy(Decomposition(dims, w, parts))
    avg = float(sum(p * qfg_entropy(c) for p, c in zip(w, parts)))
    if avg > whole + 1e-9:
        return f"average {avg} exceeds mixture {whole}"
    return None if _close(whole - avg, shannon(w), 1e-9) else f"gap {whole - avg} != H(p) {shannon(w)}"


def check_qfg_subadditivity(rng):
    s = random_tree(random_dims(rng, 2), rng)
    ab, a, b = qfg_entropy(s, "A|B", keep=[0, 1]), qfg_entropy(s, "A|B", keep=0), qfg_entropy(s, "A|B", keep=1)
    return None if ab <= a + b + TOL else f"S(AB)={ab} > S(A)+S(B)={a + b}"


def check_qfg_strong_subadditivity(rng):
    s = random_tree(random_dims(rng, 3), rng)
    i_bc = qfg_mutual_information(s, "A|B|C", between=[(1,), (2,)]).total
    i_abc = qfg_mutual_information(s, "A|B|C", between=[(0, 1), (2,)]).total
    return None if i_bc <= i_abc + TOL else f"I(B:C)={i_bc} > I(AB:C)={i_abc}"


def check_qfg_conditional(rng):
    s = random_tree(random_dims(rng, 2), rng)
    c = [qfg_conditional(s, "A|B", given=g) for g in (0, 1)]
    if min(c) < -TOL:
        return f"negative conditional {min(c)}"
    p = random_pure(random_dims(rng, 2), rng)
    c0 = qfg_conditional(p, "A|B")
    return None if abs(c0) <= TOL else f"pure conditional {c0} != 0"


def check_type2_recovery(rng):
    d = int(rng.integers(2, 4))
    w = rng.dirichlet(np.ones(2))
    sectors = tuple(random_pure((d,), rng) for _ in range(2))
    relabeled = type2_relabel(Decomposition((d,), w, sectors))
    got = qfg_entropy(relabeled)
    m = flatten(relabeled)
    if np.max(np.abs(m - np.diag(np.diag(m)))) > 1e-12:
        return "relabeled state is not diagonal"
    return None if _close(got, shannon(w), 1e-9) and _close(von_neumann(m), shannon(w), 1e-9) else f"{got} != H(lambda) {shannon(w)}"


# ---------------------------------------------------------------------------
# von Neumann checks


def _rand_rho(rng, d=None):
    d = d or int(rng.choice([2, 3, 4]))
    rank = int(rng.integers(1, d + 1))
    return linalg.random_density(d, rng, rank=rank)


def check_vn_p1(rng):
    rho = _rand_rho(rng)
    if von_neumann(rho) < -1e-12:
        return "negative entropy"
    psi = linalg.random_pure(int(rng.integers(2, 6)), rng)
    s = von_neumann(linalg.projector(psi))
    return None if abs(s) < 1e-9 else f"pure state entropy {s}"


def check_vn_p2(rng):
    d = int(rng.integers(2, 6))
    rho = _rand_rho(rng, d)
    if von_neumann(rho) > log2(d) + 1e-12:
        return "entropy above log d"
    return None if _close(von_neumann(np.eye(d) / d), log2(d), 1e-12) else "maximally mixed entropy wrong"


def _orthogonal_sectors(rng, d: int, k: int):
    """k density matrices with mutually orthogonal supports in dimension d."""
    u = linalg.random_unitary(d, rng)
    cuts = np.sort(rng.choice(np.arange(1, d), size=k - 1, replace=False))
    blocks = np.split(np.arange(d), cuts)
    out = []
    for b in blocks:
        sub = linalg.random_density(b.size, rng)
        v = u[:, b]
        out.append(v @ sub @ v.conj().T)
    return out


def check_vn_p3(rng):
    d = int(rng.integers(3, 7))
    k = int(rng.integers(2, min(d, 4) + 1))
    sec = _orthogonal_sectors(rng, d, k)
    w = rng.dirichlet(np.ones(k))
    lhs = von_neumann(sum(p * r for p, r in zip(w, sec)))
    rhs = shannon(w) + float(sum(p * von_neumann(r) for p, r in zip(w, sec)))
    return None if _close(lhs, rhs, 1e-9) else f"S={lhs} but H(p)+sum p S={rhs}"


def check_vn_p4(rng):
    d = int(rng.integers(2, 5))
    k = int(rng.integers(2, 5))
    w = rng.dirichlet(np.ones(k))
    sec = [_rand_rho(rng, d) for _ in range(k)]
    mid = von_neumann(sum(p * r for p, r in zip(w, sec)))
    avg = float(sum(p * von_neumann(r) for p, r in zip(w, sec)))
    if avg > mid + 1e-9:
        return f"concavity violated {avg} > {mid}"
    d2 = int(rng.integers(3, 7))
    k2 = int(rng.integers(2, min(d2, 4) + 1))
    osec = _orthogonal_sectors(rng, d2, k2)
    w2 = rng.dirichlet(np.ones(k2))
    top = von_neumann(sum(p * r for p, r in zip(w2, osec)))
    bound = shannon(w2) + float(sum(p * von_neumann(r) for p, r in zip(w2, osec)))
    return None if top <= bound + 1e-9 else f"mixing bound violated {top} > {bound}"


def check_vn_p5(rng):
    dims = random_dims(rng, 2)
    rho = linalg.random_density(prod(dims), rng, rank=int(rng.integers(1, prod(dims) + 1)))
    i, _ = vn_mutual_conditional(rho, dims)
    return None if i >= -1e-9 else f"negative mutual information {i}"


def check_vn_p6(rng):
    dims = (2, 2, 2)
    rho = linalg.random_density(8, rng, rank=int(rng.integers(1, 9)))

    def s(keep):
        return von_neumann(linalg.reduce_to(rho, dims, keep))

    lhs = von_neumann(rho) + s([1])
    rhs = s([0, 1]) + s([1, 2])
    return None if lhs <= rhs + 1e-9 else f"SSA violated {lhs} > {rhs}"


def check_vn_p10(rng):
    d = int(rng.integers(2, 5))
    rho = _rand_rho(rng, d)
    u = linalg.random_unitary(d, rng)
    projs = [linalg.projector(u[:, j]) for j in range(d)]
    after = sum(p @ rho @ p for p in projs)
    sa, sb = von_neumann(rho), von_neumann(after)
    return None if sb >= sa - 1e-9 else f"measurement lowered entropy {sa} -> {sb}"


def check_vn_p11(rng):
    dims = random_dims(rng, 2)
    d = prod(dims)
    rho = linalg.random_density(d, rng)
    sigma = linalg.random_density(d, rng)
    whole = relative_entropy(rho, sigma)
    part = relative_entropy(linalg.reduce_to(rho, dims, [0]), linalg.reduce_to(sigma, dims, [0]))
    return None if part <= whole + 1e-9 else f"monotonicity violated {part} > {whole}"


def check_joint_entropy(rng):
    k = int(rng.integers(2, 4))
    db = int(rng.integers(2, 4))
    w = rng.dirichlet(np.ones(k))
    sig = [_rand_rho(rng, db) for _ in range(k)]
    rho = sum(p * np.kron(np.diag(np.eye(k)[i]), s) for i, (p, s) in enumerate(zip(w, sig)))
    lhs = von_neumann(rho)
    rhs = shannon(w) + float(sum(p * von_neumann(s) for p, s in zip(w, sig)))
    return None if _close(lhs, rhs, 1e-9) else f"S={lhs} but H(p)+sum p S={rhs}"


def check_projective_measurement(rng):
    """Projective measurement on random trees: von Neumann never falls; total fine-grained bookkeeping stays finite."""
    d = int(rng.integers(2, 4))
    s = random_tree((d,), rng, 1)
    u = linalg.random_unitary(d, rng)
    fam = MeasurementFamily(tuple(linalg.projector(u[:, j]) for j in range(d)))
    r = measurement_ledger(s, fam)
    return None if r.vn_after >= r.vn_before - 1e-9 else f"von Neumann fell {r.vn_before} -> {r.vn_after}"


SUITES: dict[str, Callable] = {
    "qfg_nonnegativity": check_qfg_nonnegative,
    "qfg_additivity": check_qfg_additivity,
    "qfg_concavity_gap": check_qfg_concavity,
    "qfg_subadditivity": check_qfg_subadditivity,
    "qfg_strong_subadditivity": check_qfg_strong_subadditivity,
    "qfg_conditional_nonnegative": check_qfg_conditional,
    "type2_recovery": check_type2_recovery,
    "vn_nonnegative_pure_zero": check_vn_p1,
    "vn_maximal_mixed": check_vn_p2,
    "vn_orthogonal_mixing": check_vn_p3,
    "vn_concavity_mixing": check_vn_p4,
    "vn_subadditivity": check_vn_p5,
    "vn_strong_subadditivity": check_vn_p6,
    "vn_projective_measurement": check_vn_p10,
    "vn_relative_monotonicity": check_vn_p11,
    "vn_joint_entropy": check_joint_entropy,
    "measurement_ledger_vn": check_projective_measurement,
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int
    first_failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


def instance_rng(name: str, seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(name.encode()), int(index)]))


def run_suite(name: str, instances: int = DEFAULT_INSTANCES, seed: int = 0) -> SuiteResult:
    check = SUITES[name]
    passed = failed = 0
    first = None
    for i in range(instances):
        try:
            msg = check(instance_rng(name, seed, i))
        except Exception as exc:  # a crash counts as a failure of that instance
            msg = f"{type(exc).__name__}: {exc}"
        if msg is None:
            passed += 1
        else:
            failed += 1
            first = first or f"instance {i}: {msg}"
    return SuiteResult(name, passed, failed, first)


def run_all(instances: int = DEFAULT_INSTANCES, seed: int = 0, names=None) -> list[SuiteResult]:
    return [run_suite(n, instances, seed) for n in (names or SUITES)]


# ---------------------------------------------------------------------------
# exploratory report: strong subadditivity of the fine-grained conditional entropy


@dataclass(frozen=True)
class ConditionalSSAReport:
    instances: int
    violations: int
    worst_margin: float
    worst_instance: int | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def conditional_ssa_search(instances: int = DEFAULT_INSTANCES, seed: int = 0) -> ConditionalSSAReport:
    """Search 4-party trees for S(ABC|D) + S(B|D) > S(AB|D) + S(BC|D), each side in the A|B|C|D context.

    Conditional entropies are S(X|D) = S(XD) - S(D).  Nothing is asserted;
    the search reports the largest violation margin it found.
    """
    worst, worst_i, bad = -np.inf, None, 0
    for i in range(instances):
        rng = instance_rng("conditional_ssa", seed, i)
        s = random_tree(random_dims(rng, 4), rng)

        def cond(groups):
            return qfg_entropy(s, "A|B|C|D", keep=list(groups) + [3]) - qfg_entropy(s, "A|B|C|D", keep=3)

        margin = cond([0, 1, 2]) + cond([1]) - cond([0, 1]) - cond([1, 2])
        if margin > TOL:
            bad += 1
        if margin > worst:
            worst, worst_i = float(margin), i
    return ConditionalSSAReport(instances, bad, worst, worst_i)
