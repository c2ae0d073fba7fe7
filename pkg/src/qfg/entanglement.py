"""Entanglement and quantumness measures, plus measurement and teleportation ledgers."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .entropy import (
    binary_entropy,
    qfg_entropy,
    qfg_mutual_information,
    shannon,
    von_neumann,
)
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, dagger
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
    bell,
    flatten,
    leaves,
    mixture,
    pure,
)


class EntanglementError(ValueError):
    pass


# ---------------------------------------------------------------------------
# pure-state entanglement


def entropy_of_entanglement(psi, cut="A|B", dims=None) -> float:
    """Von Neumann entropy of either side of a bipartite pure state."""
    if isinstance(psi, PureSector):
        dims, vec = psi.dims, psi.vector()
    elif isinstance(psi, (Decomposition, OpaqueSector, ProductSector)):
        raise EntanglementError("entropy of entanglement needs a pure sector")
    else:
        if dims is None:
            raise EntanglementError("dims are required for a bare vector")
        vec = linalg.ket(psi)
        if vec.size != prod(dims):
            raise EntanglementError(f"vector of length {vec.size} does not match dims {tuple(dims)}")
    p = as_partition(cut, len(dims))
    if p.m != 2 or p.n != len(dims):
        raise EntanglementError("entropy of entanglement needs a bipartite cut covering every party")
    side_a, side_b = list(p.groups[0]), list(p.groups[1])
    vec = linalg.permute_parties(vec, dims, side_a + side_b)
    da = prod(dims[i] for i in side_a)
    sch = linalg.schmidt_decompose(vec, da, vec.size // da, tol=1e-8)
    return shannon(sch.coefficients**2 / np.sum(sch.coefficients**2))


# ---------------------------------------------------------------------------
# Wootters closed form (two qubits)


def concurrence_wootters(rho) -> float:
    rho = linalg.validate_density(rho)
    if rho.shape != (4, 4):
        raise EntanglementError("Wootters concurrence is defined for two qubits")
    yy = np.kron(PAULI_Y, PAULI_Y)
    tilde = yy @ rho.conj() @ yy
    s = linalg.sqrtm_psd(rho)
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(s @ tilde @ s), 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_wootters(rho) -> float:
    c = concurrence_wootters(rho)
    return binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)


# ---------------------------------------------------------------------------
# numerical entanglement of formation


@dataclass(frozen=True)
class DecompositionAnsatz:
    """Pure-state decompositions with ``rank`` members.

    Members are the rows of U[:, :r0] diag(sqrt(lambda)) E^T where
    rho = E diag(lambda) E^dag and U = exp(iH) is an r x r unitary acting on
    the purifying ancilla; the r^2 real parameters fill H.
    """

    rank: int = 4

    def n_params(self) -> int:
        return self.rank * self.rank


def _hermitian_from(x: np.ndarray, r: int) -> np.ndarray:
    iu = np.triu_indices(r, 1)
    m = iu[0].size
    h = np.zeros((r, r), dtype=complex)
    h[iu] = x[r : r + m] + 1j * x[r + m :]
    h = h + dagger(h)
    h[np.diag_indices(r)] = x[:r]
    return h


def _hermitian_grad(y: np.ndarray, r: int) -> np.ndarray:
    # dF/dx_a = 2 Re(i tr(Y^dag T_a)) for the generators T_a used above
    iu = np.triu_indices(r, 1)
    cy = y.conj()
    g_diag = -2 * np.imag(np.diag(cy))
    g_re = -2 * np.imag(cy[iu] + cy.T[iu])
    g_im = -2 * np.real(cy[iu] - cy.T[iu])
    return np.concatenate([g_diag, g_re, g_im])


def ensemble(rho, params: np.ndarray, rank: int, tol: float = 1e-12):
    """Weights and normalized members of the decomposition selected by ``params``."""
    w, v = np.linalg.eigh(rho)
    idx = w > tol
    b = (v[:, idx] * np.sqrt(w[idx])).T
    u = linalg.hermitian_function(_hermitian_from(params, rank), lambda x: np.exp(1j * x))
    members = u[:, : b.shape[0]] @ b
    p = np.sum(np.abs(members) ** 2, axis=1)
    keep = p > tol
    return p[keep], members[keep] / np.sqrt(p[keep])[:, None]


def _eof_objective(rho, dims, rank):
    w, v = np.linalg.eigh(rho)
    idx = w > 1e-12
    r0 = int(idx.sum())
    b = (v[:, idx] * np.sqrt(w[idx])).T
    b_dag = b.conj().T
    da, db = dims
    left = da <= db

    def fun(x):
        h = _hermitian_from(x, rank)
        hv, wv = np.linalg.eigh(h)
        e = np.exp(1j * hv)
        u = (wv * e) @ wv.conj().T
        m = (u[:, :r0] @ b).reshape(rank, da, db)
        mh = m.conj().transpose(0, 2, 1)
        xm = m @ mh if left else mh @ m
        mu, q = np.linalg.eigh(xm)
        mu = np.clip(mu, 1e-300, None)
        p = mu.sum(axis=1)
        # sum_i p_i E(psi_i) = -sum mu log mu + sum p log p
        value = float(-np.sum(mu * np.log2(mu)) + np.sum(p * np.log2(p)))
        logs = np.log2(p)[:, None] - np.log2(mu)
        op = (q * logs[:, None, :]) @ q.conj().transpose(0, 2, 1)
        gm = op @ m if left else m @ op
        gu = np.zeros((rank, rank), dtype=complex)
        gu[:, :r0] = gm.reshape(rank, -1) @ b_dag
        dh = hv[:, None] - hv[None, :]
        close = np.abs(dh) < 1e-12
        phi = np.where(close, e[:, None], (e[:, None] - e[None, :]) / (1j * np.where(close, 1.0, dh)))
        y = wv @ ((wv.conj().T @ gu @ wv) * phi.conj()) @ wv.conj().T
        return value, _hermitian_grad(y, rank)

    return fun


@dataclass(frozen=True)
class EofResult:
    value: float
    params: np.ndarray
    rank: int
    restart_values: tuple[float, ...]


def eof_search(rho, dims=(2, 2), ansatz: DecompositionAnsatz | None = None, restarts: int = 16, seed: int = 0) -> EofResult:
    rho = linalg.validate_density(rho)
    dims = tuple(dims)
    if len(dims) != 2 or prod(dims) != rho.shape[0]:
        raise EntanglementError(f"dims {dims} do not describe a bipartite state of dimension {rho.shape[0]}")
    ansatz = ansatz or DecompositionAnsatz(rho.shape[0])
    rank_rho = int(np.sum(np.linalg.eigvalsh(rho) > 1e-12))
    if not rank_rho <= ansatz.rank <= rho.shape[0] ** 2:
        raise EntanglementError(f"ansatz rank {ansatz.rank} infeasible for rho of rank {rank_rho}")
    fun = _eof_objective(rho, dims, ansatz.rank)
    rng = np.random.default_rng(seed)
    best_val, best_x, values = np.inf, None, []
    # restart 0 starts from the eigen-ensemble; ties keep the lowest index
    for k in range(max(1, restarts)):
        x0 = np.zeros(ansatz.n_params()) if k == 0 else rng.standard_normal(ansatz.n_params()) * np.pi
        start_val = fun(x0)[0]
        res = minimize(fun, x0, jac=True, method="L-BFGS-B", options={"maxiter": 500, "gtol": 1e-10, "ftol": 1e-14})
        val, x = (res.fun, res.x) if res.fun <= start_val else (start_val, x0)
        values.append(float(val))
        if val < best_val:
            best_val, best_x = float(val), x
    return EofResult(max(best_val, 0.0), best_x, ansatz.rank, tuple(values))


def eof_numeric(rho, dims=(2, 2), ansatz: DecompositionAnsatz | None = None, restarts: int = 16, seed: int = 0) -> float:
    """Minimum of sum_i p_i E(psi_i) over pure-state decompositions of ``rho``.

    For pure members the fine-grained mutual information of |psi_i> equals
    its entropy of entanglement, so this is also the fine-grained variant of
    the entanglement of formation restricted to pure ensembles.
    """
    return eof_search(rho, dims, ansatz, restarts, seed).value


def quantum_part_given_decomposition(state: Sector, cut="A|B") -> float:
    """Quantum share of the fine-grained mutual information for the declared decomposition."""
    p = as_partition(cut, len(state.dims))
    if p.m != 2:
        raise EntanglementError("quantum_part_given_decomposition needs a bipartite cut")
    return qfg_mutual_information(state, p).quantum


# ---------------------------------------------------------------------------
# discord-type quantities (measured party must be a qubit)


def _side(measured) -> int:
    if measured in (0, "A", "a"):
        return 0
    if measured in (1, "B", "b"):
        return 1
    raise EntanglementError(f"measured side must be 'A' or 'B', got {measured!r}")


def bloch(theta, phi):
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def qubit_projectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    n = bloch(theta, phi)
    ns = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    return (np.eye(2) + ns) / 2, (np.eye(2) - ns) / 2


class _QubitMeasurement:
    """Post-measurement quantities for projective qubit measurements, vectorized over directions."""

    def __init__(self, rho, dims, measured):
        self.rho = linalg.validate_density(rho)
        self.dims = tuple(dims)
        if len(self.dims) != 2 or prod(self.dims) != self.rho.shape[0]:
            raise EntanglementError(f"dims {dims} do not match a bipartite state")
        self.side = _side(measured)
        if self.dims[self.side] != 2:
            raise EntanglementError("the measured party must be a qubit")
        self.other = 1 - self.side
        self.d_other = self.dims[self.other]
        # T_c = tr_meas((sigma_c on measured side) rho), so that
        # tr_meas(Pi_{+-} rho) = (rho_other +- n.T) / 2
        self.rho_other = linalg.partial_trace(self.rho, self.dims, [self.side])
        self.t = np.stack([linalg.partial_trace(self._embed(s) @ self.rho, self.dims, [self.side]) for s in (PAULI_X, PAULI_Y, PAULI_Z)])

    def _embed(self, op):
        eye = np.eye(self.d_other)
        return np.kron(op, eye) if self.side == 0 else np.kron(eye, op)

    def branches(self, n: np.ndarray):
        """Unnormalized conditional states of the other party for outcomes +n and -n."""
        nt = np.tensordot(n, self.t, axes=([-1], [0]))
        return (self.rho_other + nt) / 2, (self.rho_other - nt) / 2

    def conditional_entropy(self, n: np.ndarray) -> np.ndarray:
        total = np.zeros(n.shape[:-1])
        for br in self.branches(n):
            mu = np.clip(np.linalg.eigvalsh(br), 0.0, None)
            p = mu.sum(axis=-1)
            with np.errstate(divide="ignore", invalid="ignore"):
                ent = np.where(mu > 1e-300, -mu * np.log2(np.where(mu > 1e-300, mu, 1.0)), 0.0).sum(axis=-1)
                total += np.where(p > 1e-300, ent + p * np.log2(np.where(p > 1e-300, p, 1.0)), 0.0)
        return total

    def dephased(self, theta: float, phi: float) -> np.ndarray:
        chi = np.zeros_like(self.rho)
        for proj in qubit_projectors(theta, phi):
            k = self._embed(proj)
            chi += k @ self.rho @ k
        return chi


def direction_grid(n_theta: int, n_phi: int):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    return np.meshgrid(theta, phi, indexing="ij")


def _minimize_over_directions(objective_vec, objective_scalar, grid, refine: int):
    n_theta, n_phi = (grid, 2 * grid) if np.isscalar(grid) else grid
    th, ph = direction_grid(int(n_theta), int(n_phi))
    vals = objective_vec(bloch(th, ph))
    k = int(np.argmin(vals))  # lowest flat index wins ties
    best = float(vals.flat[k])
    x0 = np.array([th.flat[k], ph.flat[k]])
    if refine > 0:
        res = minimize(
            lambda x: float(objective_scalar(x[0], x[1])),
            x0,
            method="Nelder-Mead",
            options={"maxiter": refine, "xatol": 1e-12, "fatol": 1e-15, "initial_simplex": x0 + np.array([[0, 0], [np.pi / n_theta, 0], [0, np.pi / n_phi]])},
        )
        if res.fun < best:
            best, x0 = float(res.fun), res.x
    return best, x0


def quantum_discord(rho, dims=(2, 2), measured="B", grid=(31, 62), refine: int = 400) -> float:
    """D = S(rho_meas) - S(rho) + min over projective measurements of sum_i p_i S(rho_other^i).

    The measured party must be a qubit; directions are searched on a
    (theta, phi) grid, then refined locally.  The refined value only replaces
    the grid minimum when it is lower.
    """
    qm = _QubitMeasurement(rho, dims, measured)
    cond, _ = _minimize_over_directions(
        qm.conditional_entropy,
        lambda t, p: qm.conditional_entropy(bloch(t, p)[None, :])[0],
        grid,
        refine,
    )
    s_meas = von_neumann(linalg.partial_trace(qm.rho, qm.dims, [qm.other]))
    return max(s_meas - von_neumann(qm.rho) + cond, 0.0)


def geometric_discord(rho, dims=(2, 2), measured="B", grid=(31, 62), refine: int = 400) -> float:
    """min over qubit projective measurements of ||rho - chi||_HS^2, chi the dephased state."""
    qm = _QubitMeasurement(rho, dims, measured)
    norm_rho = linalg.hs_norm_sq(qm.rho)

    def vec(n):
        # ||rho - chi||^2 = ||rho||^2 - ||chi||^2 and ||chi||^2 = sum_+- ||Pi rho Pi||^2
        # = (||rho_other-block||...) evaluated directly below
        out = np.empty(n.shape[:-1])
        for idx in np.ndindex(*n.shape[:-1]):
            th = np.arccos(np.clip(n[idx][2], -1, 1))
            ph = np.arctan2(n[idx][1], n[idx][0])
            out[idx] = norm_rho - linalg.hs_norm_sq(qm.dephased(th, ph))
        return out

    val, _ = _minimize_over_directions(vec, lambda t, p: norm_rho - linalg.hs_norm_sq(qm.dephased(t, p)), grid, refine)
    return max(val, 0.0)


def relative_entropy_of_discord(rho, dims=(2, 2), measured="B", grid=(31, 62), refine: int = 400) -> float:
    """min over qubit projective measurements of S(rho || chi) = S(chi) - S(rho)."""
    qm = _QubitMeasurement(rho, dims, measured)
    s_rho = von_neumann(qm.rho)

    def scalar(t, p):
        return von_neumann(qm.dephased(t, p)) - s_rho

    def vec(n):
        out = np.empty(n.shape[:-1])
        for idx in np.ndindex(*n.shape[:-1]):
            out[idx] = scalar(np.arccos(np.clip(n[idx][2], -1, 1)), np.arctan2(n[idx][1], n[idx][0]))
        return out

    val, _ = _minimize_over_directions(vec, scalar, grid, refine)
    return max(val, 0.0)


# ---------------------------------------------------------------------------
# measurement ledger


@dataclass(frozen=True)
class MeasurementFamily:
    operators: tuple[np.ndarray, ...]
    kind: str = "projective"

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(o) for o in self.operators)
        object.__setattr__(self, "operators", ops)
        if self.kind not in ("projective", "povm"):
            raise EntanglementError(f"unknown measurement kind {self.kind!r}")
        if not ops:
            raise EntanglementError("measurement family is empty")
        d = ops[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for e in ops:
            if e.shape != (d, d) or not linalg.is_hermitian(e, 1e-9):
                raise EntanglementError("measurement elements must be Hermitian and of equal size")
            if np.linalg.eigvalsh(e).min() < -1e-9:
                raise EntanglementError("measurement elements must be positive semidefinite")
            total += e
        if np.max(np.abs(total - np.eye(d))) > 1e-9:
            raise EntanglementError("measurement elements do not sum to the identity")
        if self.kind == "projective":
            for i, a in enumerate(ops):
                if np.max(np.abs(a @ a - a)) > 1e-9:
                    raise EntanglementError("projective elements must be idempotent")
                for b in ops[i + 1 :]:
                    if np.max(np.abs(a @ b)) > 1e-9:
                        raise EntanglementError("projective elements must be mutually orthogonal")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def kraus(self) -> tuple[np.ndarray, ...]:
        if self.kind == "projective":
            return self.operators
        return tuple(linalg.sqrtm_psd(e) for e in self.operators)

    @classmethod
    def computational(cls, d: int) -> "MeasurementFamily":
        return cls(tuple(np.diag(np.eye(d)[i]).astype(complex) for i in range(d)))

    @classmethod
    def qubit(cls, theta: float, phi: float) -> "MeasurementFamily":
        return cls(qubit_projectors(theta, phi))


def _apply_local(vec_or_rho, dims, party, k):
    """Apply operator ``k`` to ``party`` (or to the whole space when party is None)."""
    if party is None:
        full = k
    else:
        full = linalg.tensor_product(*[k if j == party else np.eye(d) for j, d in enumerate(dims)])
    a = np.asarray(vec_or_rho)
    return full @ a if a.ndim == 1 else full @ a @ dagger(full)


def _first_pure(s: Sector):
    for _, leaf in leaves(s):
        if isinstance(leaf, PureSector):
            return leaf
    return None


def _transform(s: Sector, k: np.ndarray, party):
    """(probability, post-operation sector or None) for a single Kraus operator."""
    if isinstance(s, PureSector):
        v = _apply_local(s.vector(), s.dims, party, k)
        q = float(np.real(np.vdot(v, v)))
        if q <= 1e-14:
            return 0.0, None
        return q, PureSector.from_vector(s.dims, v / np.sqrt(q), s.bases)
    if isinstance(s, OpaqueSector):
        m = _apply_local(s.matrix, s.dims, party, k)
        q = float(np.real(np.trace(m)))
        if q <= 1e-14:
            return 0.0, None
        m = m / q
        return q, OpaqueSector(s.dims, (m + dagger(m)) / 2)
    if isinstance(s, Decomposition):
        parts = [(w, *_transform(c, k, party)) for w, c in zip(s.weights, s.sectors)]
        q = sum(w * qi for w, qi, _ in parts)
        if q <= 1e-14:
            return 0.0, None
        kept = [(w * qi / q, c) for w, qi, c in parts if c is not None and w * qi / q > 1e-12]
        tot = sum(w for w, _ in kept)
        return q, Decomposition(s.dims, [w / tot for w, _ in kept], [c for _, c in kept])
    if isinstance(s, ProductSector):
        if party is not None:
            for gi, g in enumerate(s.groups):
                if party in g:
                    q, f = _transform(s.factors[gi], k, g.index(party))
                    if f is None:
                        return 0.0, None
                    factors = list(s.factors)
                    factors[gi] = f
                    return q, ProductSector(s.dims, s.groups, tuple(factors))
        matrix = flatten(s)
        return _transform(OpaqueSector(s.dims, matrix), k, party)
    raise StateError(f"unknown sector type {type(s).__name__}")


def _collapse(s: Sector) -> Sector:
    """A mixed post-measurement sector that has become a pure state is stored as that pure state."""
    if not isinstance(s, Decomposition) or len(s.sectors) == 1 and not isinstance(s.sectors[0], Decomposition):
        return s
    rho = flatten(s)
    spec = linalg.hermitian_eig(rho)
    if spec.eigenvalues[0] < 1 - 1e-10:
        return s
    ref = _first_pure(s)
    return PureSector.from_vector(s.dims, spec.eigenvectors[:, 0], ref.bases if ref is not None else None)


@dataclass(frozen=True)
class MeasurementReport:
    vn_before: float
    vn_after: float
    qfg_before: float
    qfg_after: float
    probabilities: tuple[float, ...]
    post_state: Decomposition

    @property
    def vn_delta(self) -> float:
        return self.vn_after - self.vn_before

    @property
    def qfg_delta(self) -> float:
        return self.qfg_after - self.qfg_before

    def as_dict(self) -> dict:
        return {
            "vn_before": self.vn_before,
            "vn_after": self.vn_after,
            "vn_delta": self.vn_delta,
            "qfg_before": self.qfg_before,
            "qfg_after": self.qfg_after,
            "qfg_delta": self.qfg_delta,
            "probabilities": list(self.probabilities),
        }


def measurement_ledger(state: Sector, family: MeasurementFamily, party: int | None = None, partition=None) -> MeasurementReport:
    """Entropy bookkeeping for a non-selective measurement.

    The post-measurement state is the outcome mixture sum_j q_j sigma_j;
    each sigma_j is the operated tree, stored as a pure sector when the
    operation leaves it pure.
    """
    state = as_decomposition(state)
    expected = state.dims[party] if party is not None else prod(state.dims)
    if family.dim != expected:
        raise EntanglementError(f"measurement acts on dimension {family.dim}, target has {expected}")
    rho = flatten(state)
    probs, outs = [], []
    post_rho = np.zeros_like(rho)
    for k in family.kraus():
        post_rho += _apply_local(rho, state.dims, party, k)
        q, s = _transform(state, k, party)
        if s is not None and q > 1e-12:
            probs.append(q)
            outs.append(_collapse(s))
    total = sum(probs)
    probs = [float(q / total) for q in probs]
    post = Decomposition(state.dims, probs, outs)
    part = as_partition(partition, len(state.dims))
    return MeasurementReport(
        vn_before=von_neumann(rho),
        vn_after=von_neumann((post_rho + dagger(post_rho)) / 2),
        qfg_before=qfg_entropy(state, part),
        qfg_after=qfg_entropy(post, part),
        probabilities=tuple(probs),
        post_state=post,
    )


def qfg_decrease_fixture() -> tuple[Decomposition, MeasurementFamily]:
    """Equal mixture of |+> and |-> written in the computational basis, measured in that basis.

    Fine-grained entropy drops from 2 to 1 bit; the von Neumann entropy stays at 1.
    """
    s = 1 / np.sqrt(2)
    state = mixture([0.5, 0.5], [pure((2,), {(0,): s, (1,): s}), pure((2,), {(0,): s, (1,): -s})])
    return state, MeasurementFamily.computational(2)


# ---------------------------------------------------------------------------
# teleportation ledger

_CNOT_01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True)
class TeleportationReport:
    input_entropy: float
    total_before: float
    outcome_probabilities: tuple[float, ...]
    bob_entropies: tuple[float, ...]
    totals_after_outcome: tuple[float, ...]
    total_after_correction: float
    fidelities: tuple[float, ...]

    @property
    def conserved(self) -> bool:
        ref = self.total_before
        vals = (*self.totals_after_outcome, self.total_after_correction)
        return all(abs(v - ref) < 1e-9 for v in vals)

    def as_dict(self) -> dict:
        return {
            "input_entropy": self.input_entropy,
            "total_before": self.total_before,
            "outcome_probabilities": list(self.outcome_probabilities),
            "bob_entropies": list(self.bob_entropies),
            "totals_after_outcome": list(self.totals_after_outcome),
            "total_after_correction": self.total_after_correction,
            "fidelities": list(self.fidelities),
            "conserved": self.conserved,
        }


def teleportation_ledger(alpha1: complex, alpha2: complex) -> TeleportationReport:
    """Simulate teleportation of alpha1|0> + alpha2|1> through |phi+> and track fine-grained entropy.

    Before the Bell measurement the total is S(input) plus the single-party
    entropies of the two halves of the Bell pair; afterwards it is the
    entropy of Alice's two-bit record plus Bob's state.
    """
    if abs(abs(alpha1) ** 2 + abs(alpha2) ** 2 - 1) > 1e-9:
        raise EntanglementError("teleported amplitudes must be normalized")
    psi = pure((2,), {(0,): alpha1, (1,): alpha2})
    pair = bell("phi_plus")
    s_in = qfg_entropy(psi)
    total_before = s_in + qfg_entropy(pair, "A|B", keep=0) + qfg_entropy(pair, "A|B", keep=1)

    state = np.kron(psi.vector(), pair.vector())  # qubits: input, Alice's half, Bob's half
    state = np.kron(_CNOT_01, np.eye(2)) @ state
    state = np.kron(np.kron(linalg.HADAMARD, np.eye(2)), np.eye(2)) @ state
    amps = state.reshape(2, 2, 2)

    probs, bob_s, corrected_s, fids = [], [], [], []
    for m0 in (0, 1):
        for m1 in (0, 1):
            bob = amps[m0, m1, :]
            q = float(np.real(np.vdot(bob, bob)))
            bob = bob / np.sqrt(q)
            probs.append(q)
            bob_s.append(qfg_entropy(PureSector.from_vector((2,), bob)))
            fixed = np.linalg.matrix_power(PAULI_Z, m0) @ np.linalg.matrix_power(PAULI_X, m1) @ bob
            corrected_s.append(qfg_entropy(PureSector.from_vector((2,), fixed)))
            fids.append(float(abs(np.vdot(psi.vector(), fixed)) ** 2))
    record = shannon(probs)
    return TeleportationReport(
        input_entropy=s_in,
        total_before=total_before,
        outcome_probabilities=tuple(probs),
        bob_entropies=tuple(bob_s),
        totals_after_outcome=tuple(record + s for s in bob_s),
        total_after_correction=record + float(np.dot(probs, corrected_s)),
        fidelities=tuple(fids),
    )
