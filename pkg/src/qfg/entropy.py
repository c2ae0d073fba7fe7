"""Shannon, von Neumann, recursive and fine-grained entropies (all in bits)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .graining import LocalFormalState, _local, _reduce_pure, context_for, reduce_parties
from .statemodel import (
    Decomposition,
    OpaqueSector,
    Partition,
    ProductSector,
    PureSector,
    Sector,
    StateError,
    as_partition,
)

PROB_TOL = 1e-9
SUPPORT_TOL = 1e-10


class EntropyError(ValueError):
    pass


def check_probabilities(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise EntropyError("probability vector must be nonempty and finite")
    if np.any(p < -PROB_TOL) or abs(p.sum() - 1.0) > PROB_TOL:
        raise EntropyError(f"not a probability vector: {p.tolist()}")
    return np.clip(p, 0.0, None)


def _h(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def shannon(p) -> float:
    """H(p) = -sum p log2 p, with 0 log 0 = 0."""
    return _h(check_probabilities(p))


def binary_entropy(x: float) -> float:
    return _h(np.array([x, 1.0 - x]))


def von_neumann(rho) -> float:
    """S(rho) = -tr rho log2 rho."""
    try:
        return _h(linalg.density_spectrum(rho))
    except linalg.LinalgError as exc:
        raise EntropyError(str(exc)) from None


def generic_entropy(tree) -> float:
    """Entropy of a weighted tree ``[(m_i, W_i), ...]``.

    ``W_i`` is ``None`` for a leaf or another tree; the value is
    H(m) + sum_i m_i E(W_i).
    """
    weights = check_probabilities([m for m, _ in tree])
    total = _h(weights)
    for m, sub in zip(weights, (w for _, w in tree)):
        if sub is not None and m > 0:
            total += m * generic_entropy(sub)
    return total


# ---------------------------------------------------------------------------
# fine-grained entropy


def _tree_split(tree) -> tuple[float, float]:
    """(classical, quantum) parts of the entropy of a reduced tree.

    Mixing entropy and opaque (noise) sectors count as classical; the
    expansion entropy of pure sectors counts as quantum.
    """
    if isinstance(tree, LocalFormalState):
        return 0.0, _h(tree.term_weights)
    if isinstance(tree, OpaqueSector):
        return von_neumann(tree.matrix), 0.0
    if isinstance(tree, Decomposition):
        cl, q = _h(tree.weights), 0.0
        for w, c in zip(tree.weights, tree.sectors):
            a, b = _tree_split(c)
            cl += w * a
            q += w * b
        return float(cl), float(q)
    if isinstance(tree, ProductSector):
        parts = [_tree_split(f) for f in tree.factors]
        return sum(a for a, _ in parts), sum(b for _, b in parts)
    raise EntropyError(f"unexpected node {type(tree).__name__}")


def qfg_entropy_split(state: Sector, partition=None, keep=None) -> tuple[float, float]:
    return _tree_split(reduce_parties(state, partition, keep))


def qfg_entropy(state: Sector, partition=None, keep=None) -> float:
    """Fine-grained entropy of ``state`` (or of its type-I reduction).

    ``partition`` fixes the context ("AB|CD", a :class:`Partition`, or
    ``None`` for one group holding every party); ``keep`` selects groups of
    it, defaulting to all of them.
    """
    a, b = qfg_entropy_split(state, partition, keep)
    return a + b


@dataclass(frozen=True)
class CorrelationReport:
    total: float
    classical: float
    quantum: float
    partition: Partition

    def as_dict(self) -> dict:
        return {
            "partition": str(self.partition),
            "total": self.total,
            "classical": self.classical,
            "quantum": self.quantum,
        }


def _correlation(s: Sector, ctx, items) -> tuple[float, float]:
    """(classical, quantum) correlation among ``items`` (disjoint party sets) of one tree node."""
    if isinstance(s, Decomposition):
        cl, q = _h(s.weights), 0.0
        for w, c in zip(s.weights, s.sectors):
            a, b = _correlation(c, ctx, items)
            cl += w * a
            q += w * b
        return cl, q
    if isinstance(s, PureSector):
        q = 0.0
        for r in range(1, len(items) + 1):
            sign = 1.0 if r % 2 else -1.0
            for combo in combinations(items, r):
                q += sign * _h(_reduce_pure(s, ctx, frozenset().union(*combo)).term_weights)
        return 0.0, q
    if isinstance(s, OpaqueSector):
        whole = von_neumann(linalg.reduce_to(s.matrix, s.dims, sorted(frozenset().union(*items))))
        parts = sum(von_neumann(linalg.reduce_to(s.matrix, s.dims, sorted(it))) for it in items)
        return parts - whole, 0.0
    if isinstance(s, ProductSector):
        cl = q = 0.0
        for g, f in zip(s.groups, s.factors):
            gs = frozenset(g)
            sub_items = [frozenset(_local(it & gs, g)) for it in items if it & gs]
            if len(sub_items) < 2:
                continue
            sub_ctx = tuple(frozenset(_local(c & gs, g)) for c in ctx if c & gs)
            a, b = _correlation(f, sub_ctx, sub_items)
            cl += a
            q += b
        return cl, q
    raise EntropyError(f"unexpected node {type(s).__name__}")


def qfg_mutual_information(state: Sector, partition, between: Sequence[Sequence[int]] | None = None) -> CorrelationReport:
    """(n,m)-mutual information among the groups of ``partition``.

    Mixtures contribute H(p) + sum p_i I(rho_i).  A pure sector contributes
    the inclusion-exclusion sum over nonempty subsets T of groups,
    sum (-1)^(|T|+1) S_FG(T), which is S(A) + S(B) - S(AB) for two groups and
    the expansion entropy for m >= 3 stored terms.  Opaque sectors contribute
    sum_j S(rho_j) - S(rho) (von Neumann), products the sum over factors.
    ``between`` lists unions of partition groups to correlate instead of the
    groups themselves, e.g. ``[(0, 1), (2,)]`` for I(AB:C) inside A|B|C.
    """
    p = as_partition(partition, len(state.dims))
    if between is None:
        items = [(k,) for k in range(p.m)]
    else:
        items = [tuple(int(k) for k in b) for b in between]
        flat = [k for b in items for k in b]
        if len(set(flat)) != len(flat) or any(not 0 <= k < p.m for k in flat) or any(not b for b in items):
            raise StateError(f"between={between!r} must list disjoint groups of {p}")
    if len(items) < 2:
        raise EntropyError("mutual information needs at least two groups")
    ctx = context_for(p, len(state.dims))
    party_sets = [frozenset(i for k in b for i in p.groups[k]) for b in items]
    cl, q = _correlation(state, ctx, party_sets)
    return CorrelationReport(float(cl + q), float(cl), float(q), p)


def qfg_conditional(state: Sector, partition, given: int = 1) -> float:
    """S_FG(X|Y) = S_FG(X) - I_FG(X:Y) for a two-group partition, Y = group ``given``."""
    p = as_partition(partition, len(state.dims))
    if p.m != 2:
        raise EntropyError("conditional entropy needs a bipartite partition")
    if given not in (0, 1):
        raise EntropyError("given must be 0 or 1")
    other = 1 - given
    return qfg_entropy(state, p, keep=[other]) - qfg_mutual_information(state, p).total


# ---------------------------------------------------------------------------
# von Neumann quantities


def vn_mutual_conditional(rho, dims) -> tuple[float, float]:
    """(I(A:B), S(A|B)) for a bipartite density matrix."""
    dims = tuple(dims)
    if len(dims) != 2:
        raise EntropyError("vn_mutual_conditional needs two parties")
    try:
        rho = linalg.validate_density(rho)
        ra = linalg.partial_trace(rho, dims, [1])
        rb = linalg.partial_trace(rho, dims, [0])
    except linalg.LinalgError as exc:
        raise EntropyError(str(exc)) from None
    s_ab, s_a, s_b = von_neumann(rho), von_neumann(ra), von_neumann(rb)
    return s_a + s_b - s_ab, s_ab - s_b


def vn_entropy_of(rho, dims, keep) -> float:
    return von_neumann(linalg.reduce_to(rho, dims, keep))


def support_contained(rho, sigma, tol: float = SUPPORT_TOL) -> bool:
    spec = linalg.hermitian_eig(sigma)
    null = spec.eigenvectors[:, spec.eigenvalues <= tol]
    if null.shape[1] == 0:
        return True
    leak = np.real(np.trace(linalg.dagger(null) @ np.asarray(rho) @ null))
    return bool(leak <= tol)


def relative_entropy(rho, sigma) -> float:
    """S(rho||sigma) = tr rho (log2 rho - log2 sigma); ``math.inf`` if supp rho is not inside supp sigma."""
    try:
        rho = linalg.validate_density(rho, name="rho")
        sigma = linalg.validate_density(sigma, name="sigma")
    except linalg.LinalgError as exc:
        raise EntropyError(str(exc)) from None
    if not support_contained(rho, sigma):
        return math.inf
    sr = linalg.hermitian_eig(rho)
    ss = linalg.hermitian_eig(sigma)
    lr = np.clip(sr.eigenvalues, 0.0, None)
    ls = ss.eigenvalues
    # tr rho log rho
    term1 = float(np.sum(lr[lr > 0] * np.log2(lr[lr > 0])))
    # tr rho log sigma over supp sigma
    overlap = np.abs(linalg.dagger(sr.eigenvectors) @ ss.eigenvectors) ** 2  # |<r_i|s_j>|^2
    mask = ls > SUPPORT_TOL
    term2 = float(np.sum((lr[:, None] * overlap)[:, mask] * np.log2(ls[mask])[None, :]))
    return max(term1 - term2, 0.0)
