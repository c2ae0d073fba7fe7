"""Type-I and type-II coarse-graining.

Type-I reduction keeps a subset of partition groups while *ignoring* the rest:
term weights survive and the local factors are kept as a formal superposition,
which is different from tracing the other parties out.  How a pure sector is
expanded before reduction depends on the partition context:

* two groups (counting omitted parties as one extra group): canonicalize to
  Schmidt form across the cut;
* one group: the declared expansion;
* three or more groups: the stored expansion, term by term, with repeated
  local factors left unmerged.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .statemodel import (
    Decomposition,
    OpaqueSector,
    Partition,
    ProductSector,
    PureSector,
    Sector,
    StateError,
    as_decomposition,
    as_partition,
    flatten,
    leaves,
)


@dataclass(frozen=True, eq=False)
class LocalFormalState:
    """A type-I reduced pure sector: weighted local factors, not normalized as a vector."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    factors: tuple[np.ndarray, ...]

    kind = "formal"

    @property
    def term_weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def vector(self) -> np.ndarray:
        out = np.zeros(prod(self.dims), dtype=complex)
        for a, f in zip(self.amplitudes, self.factors):
            out += a * f
        return out

    def density(self) -> np.ndarray:
        v = self.vector()
        n = np.linalg.norm(v)
        if n < 1e-12:
            # terms cancel as a superposition; fall back to the incoherent mixture of factors
            m = sum(w * linalg.projector(f) for w, f in zip(self.term_weights, self.factors))
            return m / np.trace(m).real
        return linalg.projector(v / n)


def context_for(partition: Partition, n_parties: int) -> tuple[frozenset[int], ...]:
    groups = [frozenset(g) for g in partition.groups]
    rest = frozenset(range(n_parties)) - partition.parties
    if rest:
        groups.append(rest)
    return tuple(groups)


def _local(parties: Iterable[int], scope: Sequence[int]) -> list[int]:
    scope = list(scope)
    return sorted(scope.index(p) for p in parties)


def _reduce_pure(s: PureSector, ctx: tuple[frozenset[int], ...], kept: frozenset[int]) -> LocalFormalState:
    n = len(s.dims)
    kept_sorted = sorted(kept)
    kdims = tuple(s.dims[i] for i in kept_sorted)
    if len(ctx) == 2:
        side_a, side_b = sorted(ctx[0]), sorted(ctx[1])
        da = prod(s.dims[i] for i in side_a)
        db = prod(s.dims[i] for i in side_b)
        vec = linalg.permute_parties(s.vector(), s.dims, side_a + side_b)
        sch = linalg.schmidt_decompose(vec, da, db, tol=1e-8)
        amps = sch.coefficients.astype(complex)
        if kept == ctx[0]:
            factors = [sch.vectors_a[:, r] for r in range(amps.size)]
        elif kept == ctx[1]:
            factors = [sch.vectors_b[:, r] for r in range(amps.size)]
        else:
            order = side_a + side_b
            ab_dims = [s.dims[i] for i in order]
            perm = [order.index(j) for j in range(n)]
            factors = [
                linalg.permute_parties(np.kron(sch.vectors_a[:, r], sch.vectors_b[:, r]), ab_dims, perm)
                for r in range(amps.size)
            ]
        return LocalFormalState(kdims, amps, tuple(factors))
    factors = tuple(s.local_vector(t, kept_sorted) for t in s.terms)
    return LocalFormalState(kdims, s.amplitudes.copy(), factors)


def _reduce(s: Sector, ctx: tuple[frozenset[int], ...], kept: frozenset[int]):
    if isinstance(s, Decomposition):
        kept_dims = tuple(s.dims[i] for i in sorted(kept))
        return Decomposition(kept_dims, s.weights, [_reduce(c, ctx, kept) for c in s.sectors])
    if isinstance(s, PureSector):
        return _reduce_pure(s, ctx, kept)
    if isinstance(s, OpaqueSector):
        kept_sorted = sorted(kept)
        if len(kept_sorted) == len(s.dims):
            return s
        m = linalg.reduce_to(s.matrix, s.dims, kept_sorted)
        return OpaqueSector(tuple(s.dims[i] for i in kept_sorted), m)
    if isinstance(s, ProductSector):
        kept_sorted = sorted(kept)
        pieces, groups = [], []
        for g, f in zip(s.groups, s.factors):
            part = kept & frozenset(g)
            if not part:
                continue
            sub_ctx = tuple(frozenset(_local(c & frozenset(g), g)) for c in ctx if c & frozenset(g))
            pieces.append(_reduce(f, sub_ctx, frozenset(_local(part, g))))
            groups.append(tuple(_local(part, kept_sorted)))
        if len(pieces) == 1:
            return pieces[0]
        return ProductSector(tuple(s.dims[i] for i in kept_sorted), tuple(groups), tuple(pieces))
    raise StateError(f"cannot reduce sector of type {type(s).__name__}")


def reduce_parties(state: Sector, partition, keep=None):
    """Type-I reduction onto a union of partition groups.

    ``keep`` is a group index, an iterable of group indices, or ``None`` for
    all groups of the partition.  Parties not covered by the partition are
    treated as a single extra group that is always ignored.
    """
    p = as_partition(partition, len(state.dims))
    if keep is None:
        keep_idx = list(range(p.m))
    elif isinstance(keep, (int, np.integer)):
        keep_idx = [int(keep)]
    else:
        keep_idx = sorted(set(int(k) for k in keep))
    if not keep_idx or any(not 0 <= k < p.m for k in keep_idx):
        raise StateError(f"keep={keep!r} does not name groups of partition {p}")
    ctx = context_for(p, len(state.dims))
    kept = frozenset(i for k in keep_idx for i in p.groups[k])
    return _reduce(state, ctx, kept)


def type1_reduce(state: Sector, partition, keep: int = 0):
    """Reduce ``state`` to group ``keep`` of ``partition`` by ignoring the others."""
    return reduce_parties(state, partition, keep)


def type2_relabel(dec: Decomposition, recursive: bool = False) -> Decomposition:
    """Relabel sectors as orthonormal basis states, giving diag(p_1, p_2, ...).

    With ``recursive`` every leaf of the tree becomes its own basis state,
    weighted by the product of the weights along its path.
    """
    dec = as_decomposition(dec)
    if recursive:
        weights = [w for w, _ in leaves(dec)]
    else:
        weights = list(dec.weights)
    n = len(weights)
    sectors = [OpaqueSector((n,), np.diag(np.eye(n)[i]).astype(complex)) for i in range(n)]
    return Decomposition((n,), weights, sectors)


def trace_reduce(state: Sector, keep: Iterable[int]) -> np.ndarray:
    """Standard partial trace of the flattened state onto parties ``keep``."""
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(not 0 <= k < len(state.dims) for k in keep):
        raise StateError(f"keep={keep!r} out of range for {len(state.dims)} parties")
    return linalg.reduce_to(flatten(state), state.dims, keep)


def flatten_reduced(tree) -> np.ndarray:
    """Density matrix of a reduced tree (formal states become their normalized superposition)."""
    if isinstance(tree, LocalFormalState):
        return tree.density()
    if isinstance(tree, Decomposition):
        return sum(w * flatten_reduced(c) for w, c in zip(tree.weights, tree.sectors))
    if isinstance(tree, ProductSector):
        m = linalg.tensor_product(*[flatten_reduced(f) for f in tree.factors])
        order = [i for g in tree.groups for i in g]
        kron_dims = [tree.dims[p] for p in order]
        return linalg.permute_parties(m, kron_dims, [order.index(j) for j in range(len(tree.dims))])
    return flatten(tree)
