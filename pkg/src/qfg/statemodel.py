"""Decomposition trees for quantum states.

A state is a :class:`Decomposition` ``rho = sum_i p_i rho_i`` whose sectors are
one of

* :class:`PureSector`  -- a vector written as an explicit list of product
  terms over declared per-party orthonormal bases,
* :class:`Decomposition` -- a nested mixture,
* :class:`OpaqueSector` -- a bare density matrix with no provenance,
* :class:`ProductSector` -- independent factors over disjoint party groups.

The tree is the state's identity: two trees that flatten to the same density
matrix are different states as far as fine-grained entropy is concerned.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from math import prod, sqrt
from typing import Iterable, Sequence, Union

import numpy as np

from . import linalg
from .linalg import dagger, expm_hermitian, is_hermitian

WEIGHT_FLOOR = 1e-12
SUM_TOL = 1e-9
UNITARY_TOL = 1e-10


class StateError(ValueError):
    """Invalid decomposition tree."""


class StateFormatError(StateError):
    """Schema violation in a serialized state document."""


def _dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise StateError(f"invalid party dimensions {dims!r}")
    return out


@dataclass(frozen=True, eq=False)
class PureSector:
    dims: tuple[int, ...]
    terms: tuple[tuple[int, ...], ...]
    amplitudes: np.ndarray
    bases: tuple[np.ndarray | None, ...] = ()

    kind = "pure"

    def __post_init__(self):
        dims = _dims(self.dims)
        object.__setattr__(self, "dims", dims)
        terms = tuple(tuple(int(x) for x in t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        bases = tuple(self.bases) if self.bases else (None,) * len(dims)
        if len(bases) != len(dims):
            raise StateError("one declared basis (or None) is required per party")
        bases = tuple(None if b is None else np.asarray(b, dtype=complex) for b in bases)
        object.__setattr__(self, "bases", bases)

        if len(terms) != amps.size or not terms:
            raise StateError("pure sector needs one amplitude per term")
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes must be finite")
        if len(set(terms)) != len(terms):
            raise StateError("pure sector terms must be distinct label tuples")
        for t in terms:
            if len(t) != len(dims) or any(not 0 <= x < d for x, d in zip(t, dims)):
                raise StateError(f"term label {t} out of range for dims {dims}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > SUM_TOL:
            raise StateError(f"pure sector amplitudes have squared norm {norm}, expected 1")
        for j, b in enumerate(bases):
            if b is None:
                continue
            if b.shape != (dims[j], dims[j]):
                raise StateError(f"declared basis for party {j} has shape {b.shape}")
            if np.max(np.abs(dagger(b) @ b - np.eye(dims[j]))) > UNITARY_TOL:
                raise StateError(f"declared basis for party {j} is not unitary")

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def basis(self, party: int) -> np.ndarray:
        b = self.bases[party]
        return np.eye(self.dims[party], dtype=complex) if b is None else b

    def local_vector(self, term: tuple[int, ...], parties: Sequence[int]) -> np.ndarray:
        vec = np.ones(1, dtype=complex)
        for j in parties:
            vec = np.kron(vec, self.basis(j)[:, term[j]])
        return vec

    def vector(self) -> np.ndarray:
        parties = range(len(self.dims))
        out = np.zeros(prod(self.dims), dtype=complex)
        for amp, t in zip(self.amplitudes, self.terms):
            out += amp * self.local_vector(t, parties)
        return out

    def density(self) -> np.ndarray:
        return linalg.projector(self.vector())

    @classmethod
    def from_vector(cls, dims, vector, bases=None, cutoff: float = 1e-12) -> "PureSector":
        """Expand a dense vector over the declared product basis.

        Amplitudes with modulus below ``cutoff`` are dropped and the rest
        renormalized.
        """
        dims = _dims(dims)
        v = linalg.ket(vector)
        if v.size != prod(dims):
            raise StateError(f"vector length {v.size} does not match dims {dims}")
        bases = tuple(bases) if bases else (None,) * len(dims)
        coeffs = v.reshape(dims)
        for j, b in enumerate(bases):
            if b is not None:
                coeffs = np.moveaxis(np.tensordot(dagger(np.asarray(b, dtype=complex)), coeffs, axes=([1], [j])), 0, j)
        flat = coeffs.reshape(-1)
        idx = np.flatnonzero(np.abs(flat) > cutoff)
        if idx.size == 0:
            raise StateError("vector is zero")
        amps = flat[idx] / np.linalg.norm(flat[idx])
        terms = [tuple(int(x) for x in np.unravel_index(i, dims)) for i in idx]
        return cls(dims, tuple(terms), amps, bases)


@dataclass(frozen=True, eq=False)
class OpaqueSector:
    dims: tuple[int, ...]
    matrix: np.ndarray

    kind = "opaque"

    def __post_init__(self):
        dims = _dims(self.dims)
        object.__setattr__(self, "dims", dims)
        try:
            m = linalg.validate_density(self.matrix, name="opaque sector")
        except linalg.LinalgError as exc:
            raise StateError(str(exc)) from None
        if m.shape[0] != prod(dims):
            raise StateError(f"opaque matrix dimension {m.shape[0]} does not match dims {dims}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class ProductSector:
    dims: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]
    factors: tuple["Sector", ...]

    kind = "product"

    def __post_init__(self):
        dims = _dims(self.dims)
        object.__setattr__(self, "dims", dims)
        groups = tuple(tuple(sorted(int(i) for i in g)) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "factors", tuple(self.factors))
        flat = [i for g in groups for i in g]
        if sorted(flat) != list(range(len(dims))) or any(not g for g in groups):
            raise StateError(f"product groups {groups} must be disjoint and cover parties 0..{len(dims) - 1}")
        if len(groups) != len(self.factors):
            raise StateError("product sector needs one factor per group")
        for g, f in zip(groups, self.factors):
            if tuple(dims[i] for i in g) != f.dims:
                raise StateError(f"factor dims {f.dims} do not match group {g}")


@dataclass(frozen=True, eq=False)
class Decomposition:
    dims: tuple[int, ...]
    weights: np.ndarray
    sectors: tuple["Sector", ...]

    kind = "mixed"

    def __post_init__(self):
        dims = _dims(self.dims)
        object.__setattr__(self, "dims", dims)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "sectors", tuple(self.sectors))
        if w.size != len(self.sectors) or w.size == 0:
            raise StateError("decomposition needs one weight per sector")
        if not np.all(np.isfinite(w)) or np.any(w < WEIGHT_FLOOR):
            raise StateError(f"decomposition weights must exceed {WEIGHT_FLOOR}: {w.tolist()}")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise StateError(f"decomposition weights sum to {w.sum()}, expected 1")
        for s in self.sectors:
            if s.dims != dims:
                raise StateError(f"sector dims {s.dims} differ from decomposition dims {dims}")


Sector = Union[PureSector, OpaqueSector, ProductSector, Decomposition]


def as_decomposition(state: Sector) -> Decomposition:
    if isinstance(state, Decomposition):
        return state
    return Decomposition(state.dims, [1.0], [state])


def mixture(weights: Sequence[float], sectors: Sequence[Sector]) -> Decomposition:
    """Mixture that drops sectors whose weight is exactly zero."""
    pairs = [(float(w), s) for w, s in zip(weights, sectors) if w != 0]
    if not pairs:
        raise StateError("mixture has no sectors with nonzero weight")
    return Decomposition(pairs[0][1].dims, [w for w, _ in pairs], [s for _, s in pairs])


def product(*factors: Sector) -> ProductSector:
    """Product over consecutive party blocks."""
    groups, dims, start = [], [], 0
    for f in factors:
        n = len(f.dims)
        groups.append(tuple(range(start, start + n)))
        dims.extend(f.dims)
        start += n
    return ProductSector(tuple(dims), tuple(groups), factors)


def pure(dims, terms: dict, bases=None) -> PureSector:
    """Pure sector from a ``{label_tuple: amplitude}`` mapping; zero amplitudes are dropped."""
    items = [(tuple(k), complex(v)) for k, v in terms.items() if v != 0]
    return PureSector(tuple(dims), tuple(k for k, _ in items), np.array([v for _, v in items]), bases)


# ---------------------------------------------------------------------------
# flattening


def _permute_back(m: np.ndarray, dims: tuple[int, ...], order: list[int]) -> np.ndarray:
    kron_dims = [dims[p] for p in order]
    perm = [order.index(j) for j in range(len(dims))]
    return linalg.permute_parties(m, kron_dims, perm)


def flatten(state: Sector) -> np.ndarray:
    """Density matrix of a tree, forgetting the decomposition."""
    if isinstance(state, PureSector):
        return state.density()
    if isinstance(state, OpaqueSector):
        return state.matrix.copy()
    if isinstance(state, ProductSector):
        m = linalg.tensor_product(*[flatten(f) for f in state.factors])
        order = [i for g in state.groups for i in g]
        return _permute_back(m, state.dims, order)
    if isinstance(state, Decomposition):
        d = prod(state.dims)
        out = np.zeros((d, d), dtype=complex)
        for w, s in zip(state.weights, state.sectors):
            if s.dims != state.dims:
                raise StateError("party-structure mismatch between sectors")
            out += w * flatten(s)
        return out
    raise StateError(f"unknown sector type {type(state).__name__}")


def leaves(state: Sector, weight: float = 1.0):
    """Yield ``(weight, sector)`` for the non-mixed leaves of the tree."""
    if isinstance(state, Decomposition):
        for w, s in zip(state.weights, state.sectors):
            yield from leaves(s, weight * w)
    else:
        yield weight, state


# ---------------------------------------------------------------------------
# partitions

PARTY_LETTERS = string.ascii_uppercase


@dataclass(frozen=True)
class Partition:
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        groups = tuple(tuple(sorted(int(i) for i in g)) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        flat = [i for g in groups for i in g]
        if not groups or any(not g for g in groups):
            raise StateError("partition needs at least one nonempty group")
        if len(set(flat)) != len(flat):
            raise StateError(f"partition groups {groups} overlap")

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def parties(self) -> frozenset[int]:
        return frozenset(i for g in self.groups for i in g)

    @classmethod
    def parse(cls, spec: str, n_parties: int | None = None) -> "Partition":
        """Parse ``"AB|CD"``-style notation, letters mapping to party indices."""
        groups = []
        for chunk in spec.replace(" ", "").split("|"):
            if not chunk:
                raise StateError(f"empty group in partition {spec!r}")
            idx = []
            for ch in chunk:
                if ch not in PARTY_LETTERS:
                    raise StateError(f"bad party letter {ch!r} in partition {spec!r}")
                idx.append(PARTY_LETTERS.index(ch))
            groups.append(tuple(idx))
        p = cls(tuple(groups))
        if n_parties is not None:
            p.check(n_parties)
        return p

    @classmethod
    def trivial(cls, n_parties: int) -> "Partition":
        return cls((tuple(range(n_parties)),))

    @classmethod
    def singletons(cls, n_parties: int) -> "Partition":
        return cls(tuple((i,) for i in range(n_parties)))

    def check(self, n_parties: int) -> "Partition":
        if any(i >= n_parties for i in self.parties):
            raise StateError(f"partition {self} refers to parties beyond {n_parties}")
        return self

    def __str__(self) -> str:
        return "|".join("".join(PARTY_LETTERS[i] for i in g) for g in self.groups)


def as_partition(partition, n_parties: int) -> Partition:
    if partition is None:
        return Partition.trivial(n_parties)
    if isinstance(partition, str):
        return Partition.parse(partition, n_parties)
    if isinstance(partition, Partition):
        return partition.check(n_parties)
    return Partition(tuple(tuple(g) for g in partition)).check(n_parties)


# ---------------------------------------------------------------------------
# canned states

_S = 1 / sqrt(2)
PLUS_MINUS_BASIS = np.array([[1, 1], [1, -1]], dtype=complex) * _S


def bell(name: str) -> PureSector:
    table = {
        "psi_plus": {(0, 1): _S, (1, 0): _S},
        "psi_minus": {(0, 1): _S, (1, 0): -_S},
        "phi_plus": {(0, 0): _S, (1, 1): _S},
        "phi_minus": {(0, 0): _S, (1, 1): -_S},
    }
    return pure((2, 2), table[name])


def ghz(alpha1: complex = _S, alpha2: complex = _S) -> PureSector:
    if abs(abs(alpha1) ** 2 + abs(alpha2) ** 2 - 1) > SUM_TOL:
        raise StateError("GHZ amplitudes must satisfy |a1|^2 + |a2|^2 = 1")
    return pure((2, 2, 2), {(0, 0, 0): alpha1, (1, 1, 1): alpha2})


def w_state() -> PureSector:
    a = 1 / sqrt(3)
    return pure((2, 2, 2), {(0, 0, 1): a, (0, 1, 0): a, (1, 0, 0): a})


def cluster4() -> PureSector:
    return pure((2, 2, 2, 2), {(0, 0, 0, 0): 0.5, (0, 0, 1, 1): 0.5, (1, 1, 0, 0): 0.5, (1, 1, 1, 1): -0.5})


def werner(z: float, variant: str = "noise_plus_bell") -> Decomposition:
    """Werner state (1-z) I/4 + z |psi+><psi+| in one of two written forms."""
    if not 0.0 <= z <= 1.0:
        raise StateError(f"Werner parameter z={z} outside [0, 1]")
    if variant == "noise_plus_bell":
        noise = OpaqueSector((2, 2), np.eye(4) / 4)
        return mixture([1 - z, z], [noise, bell("psi_plus")])
    if variant == "four_bell":
        a, b = (1 + 3 * z) / 4, (1 - z) / 4
        names = ["psi_plus", "psi_minus", "phi_plus", "phi_minus"]
        return mixture([a, b, b, b], [bell(n) for n in names])
    raise StateError(f"unknown Werner variant {variant!r}")


def maximally_mixed(d: int) -> Decomposition:
    return as_decomposition(OpaqueSector((d,), np.eye(d) / d))


def cq_state(weights: Sequence[float], states: Sequence) -> Decomposition:
    """sum_i p_i |i><i| (x) sigma_i; ``states`` holds B-side vectors or density matrices."""
    n = len(weights)
    sectors = []
    for i, s in enumerate(states):
        s = np.asarray(s, dtype=complex)
        a = pure((n,), {(i,): 1.0})
        b = PureSector.from_vector((s.shape[0],), s) if s.ndim == 1 else OpaqueSector((s.shape[0],), s)
        sectors.append(product(a, b))
    return mixture(weights, sectors)


def two_atom() -> PureSector:
    """sqrt(1/2)(|e g> - |g e>) with |g> = |0>, |e> = |1>."""
    return pure((2, 2), {(1, 0): _S, (0, 1): -_S})


CANNED = {
    "bell_psi_plus": lambda: as_decomposition(bell("psi_plus")),
    "bell_psi_minus": lambda: as_decomposition(bell("psi_minus")),
    "bell_phi_plus": lambda: as_decomposition(bell("phi_plus")),
    "bell_phi_minus": lambda: as_decomposition(bell("phi_minus")),
    "ghz": lambda a1=_S, a2=_S: as_decomposition(ghz(a1, a2)),
    "w": lambda: as_decomposition(w_state()),
    "cluster4": lambda: as_decomposition(cluster4()),
    "werner": werner,
    "maximally_mixed": maximally_mixed,
    "cq_state": cq_state,
    "two_atom": lambda: as_decomposition(two_atom()),
}


def canned_state(name: str, *args, **kwargs) -> Decomposition:
    try:
        factory = CANNED[name]
    except KeyError:
        raise StateError(f"unknown canned state {name!r}; choose from {sorted(CANNED)}") from None
    return factory(*args, **kwargs)


# ---------------------------------------------------------------------------
# ensemble evolution


@dataclass(frozen=True)
class EvolutionReport:
    deviation: float  # sectorwise-then-mix vs mix-then-evolve
    exact_error: float  # integrated flattened state vs exp(-iHt) oracle
    evolved: np.ndarray


def _liouville_rk4(rho: np.ndarray, h: np.ndarray, t: float, steps: int) -> np.ndarray:
    dt = t / steps

    def f(r):
        return -1j * (h @ r - r @ h)

    for _ in range(steps):
        k1 = f(rho)
        k2 = f(rho + dt / 2 * k1)
        k3 = f(rho + dt / 2 * k2)
        k4 = f(rho + dt * k3)
        rho = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def ensemble_evolution_check(state: Decomposition, hamiltonian, t: float, steps: int = 200) -> EvolutionReport:
    """Evolve each sector under i drho/dt = [H, rho] and mix, versus evolving the mixture."""
    h = linalg.as_matrix(hamiltonian)
    if not is_hermitian(h):
        raise StateError("Hamiltonian is not Hermitian")
    if h.shape[0] != prod(state.dims):
        raise StateError("Hamiltonian dimension does not match the state")
    if steps < 1:
        raise StateError("steps must be positive")
    mixed = sum(w * _liouville_rk4(flatten(s), h, t, steps) for w, s in zip(state.weights, state.sectors))
    direct = _liouville_rk4(flatten(state), h, t, steps)
    u = expm_hermitian(h, t)
    exact = u @ flatten(state) @ dagger(u)
    return EvolutionReport(
        deviation=float(np.max(np.abs(mixed - direct))),
        exact_error=float(np.max(np.abs(direct - exact))),
        evolved=direct,
    )


# ---------------------------------------------------------------------------
# serialization

SCHEMA_VERSION = 1


def _cnum(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _cmat(m: np.ndarray) -> list:
    return [[_cnum(z) for z in row] for row in np.asarray(m)]


def sector_to_dict(s: Sector) -> dict:
    if isinstance(s, PureSector):
        d = {
            "kind": "pure",
            "terms": [list(t) for t in s.terms],
            "amplitudes": [_cnum(a) for a in s.amplitudes],
        }
        if any(b is not None for b in s.bases):
            d["bases"] = [None if b is None else _cmat(b) for b in s.bases]
        return d
    if isinstance(s, OpaqueSector):
        return {"kind": "opaque", "matrix": _cmat(s.matrix)}
    if isinstance(s, ProductSector):
        return {
            "kind": "product",
            "groups": [list(g) for g in s.groups],
            "factors": [sector_to_dict(f) for f in s.factors],
        }
    if isinstance(s, Decomposition):
        return {
            "kind": "mixed",
            "weights": [float(w) for w in s.weights],
            "sectors": [sector_to_dict(c) for c in s.sectors],
        }
    raise StateError(f"unknown sector type {type(s).__name__}")


def to_dict(state: Decomposition) -> dict:
    state = as_decomposition(state)
    body = sector_to_dict(state)
    del body["kind"]
    return {"schema": SCHEMA_VERSION, "parties": list(state.dims), "decomposition": body}


def serialize(state: Decomposition, indent: int | None = 1) -> str:
    return json.dumps(to_dict(state), indent=indent)


def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise StateFormatError(f"{path}: expected an object")
    if key not in obj:
        raise StateFormatError(f"{path}: missing field {key!r}")
    return obj[key]


def _parse_cnum(x, path) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x)):
        raise StateFormatError(f"{path}: complex numbers are [re, im] arrays, got {x!r}")
    return complex(x[0], x[1])


def _parse_cmat(x, path) -> np.ndarray:
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise StateFormatError(f"{path}: expected a matrix as a list of rows")
    return np.array([[_parse_cnum(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(x)])


def _parse_sector(obj, dims, path) -> Sector:
    kind = _need(obj, "kind", path)
    try:
        if kind == "pure":
            terms = _need(obj, "terms", path)
            amps = _need(obj, "amplitudes", path)
            if not isinstance(terms, list) or not isinstance(amps, list):
                raise StateFormatError(f"{path}: terms and amplitudes must be arrays")
            bases = obj.get("bases")
            if bases is not None:
                if not isinstance(bases, list) or len(bases) != len(dims):
                    raise StateFormatError(f"{path}.bases: need one entry per party")
                bases = [None if b is None else _parse_cmat(b, f"{path}.bases[{j}]") for j, b in enumerate(bases)]
            return PureSector(
                tuple(dims),
                tuple(tuple(t) for t in terms),
                np.array([_parse_cnum(a, f"{path}.amplitudes[{k}]") for k, a in enumerate(amps)]),
                tuple(bases) if bases else (),
            )
        if kind == "opaque":
            return OpaqueSector(tuple(dims), _parse_cmat(_need(obj, "matrix", path), f"{path}.matrix"))
        if kind == "product":
            groups = _need(obj, "groups", path)
            factors = _need(obj, "factors", path)
            if not isinstance(groups, list) or not isinstance(factors, list) or len(groups) != len(factors):
                raise StateFormatError(f"{path}: groups and factors must be arrays of equal length")
            parsed = []
            for k, (g, f) in enumerate(zip(groups, factors)):
                if not isinstance(g, list) or not all(isinstance(i, int) and 0 <= i < len(dims) for i in g):
                    raise StateFormatError(f"{path}.groups[{k}]: invalid party indices {g!r}")
                parsed.append(_parse_sector(f, [dims[i] for i in sorted(g)], f"{path}.factors[{k}]"))
            return ProductSector(tuple(dims), tuple(tuple(g) for g in groups), tuple(parsed))
        if kind == "mixed":
            return _parse_mixed(obj, dims, path)
    except StateFormatError:
        raise
    except (StateError, linalg.LinalgError, TypeError, ValueError) as exc:
        raise StateFormatError(f"{path}: {exc}") from None
    raise StateFormatError(f"{path}.kind: unknown sector kind {kind!r}")


def _parse_mixed(obj, dims, path) -> Decomposition:
    weights = _need(obj, "weights", path)
    sectors = _need(obj, "sectors", path)
    if not isinstance(weights, list) or not isinstance(sectors, list):
        raise StateFormatError(f"{path}: weights and sectors must be arrays")
    if not all(isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights):
        raise StateFormatError(f"{path}.weights: weights must be numbers")
    parsed = [_parse_sector(s, dims, f"{path}.sectors[{k}]") for k, s in enumerate(sectors)]
    try:
        return Decomposition(tuple(dims), weights, tuple(parsed))
    except StateError as exc:
        raise StateFormatError(f"{path}: {exc}") from None


def from_dict(doc) -> Decomposition:
    dims = _need(doc, "parties", "<root>")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise StateFormatError("parties: expected a nonempty list of positive integers")
    return _parse_mixed(_need(doc, "decomposition", "<root>"), dims, "decomposition")


def parse(text: str) -> Decomposition:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(doc)


def load(path) -> Decomposition:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(state: Decomposition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(state))
        fh.write("\n")
