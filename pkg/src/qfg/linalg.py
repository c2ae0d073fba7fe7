"""Dense complex-matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Everything here
is a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-9
NORM_TOL = 1e-10
MAX_DIM = 64


class LinalgError(ValueError):
    """Raised for malformed matrices or violated preconditions."""


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise LinalgError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinalgError("matrix contains NaN or Inf")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def ket(vector) -> np.ndarray:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise LinalgError("vector contains NaN or Inf")
    return v


def projector(vector) -> np.ndarray:
    v = ket(vector)
    return np.outer(v, v.conj())


def tensor_product(*ms) -> np.ndarray:
    """Kronecker product of any number of matrices (or vectors)."""
    out = np.ones((1, 1), dtype=complex) if np.ndim(ms[0]) == 2 else np.ones(1, dtype=complex)
    for m in ms:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> HermitianSpectrum:
    """Spectrum of a Hermitian matrix with eigenvalues in descending order."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise LinalgError(f"matrix is not square: {a.shape}")
    if not is_hermitian(a, tol):
        raise LinalgError("matrix is not Hermitian")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    order = np.argsort(-w, kind="stable")
    return HermitianSpectrum(w[order], v[:, order])


def hermitian_function(m, func) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    spec = hermitian_eig(m)
    vals = np.array([func(x) for x in spec.eigenvalues], dtype=complex)
    v = spec.eigenvectors
    return (v * vals) @ dagger(v)


def sqrtm_psd(m) -> np.ndarray:
    return hermitian_function(m, lambda x: np.sqrt(max(x, 0.0)))


def expm_hermitian(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h."""
    return hermitian_function(h, lambda x: np.exp(-1j * x * t))


def validate_density(rho, tol: float = PSD_TOL, name: str = "rho") -> np.ndarray:
    a = as_matrix(rho)
    if a.shape[0] != a.shape[1]:
        raise LinalgError(f"{name} is not square: {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise LinalgError(f"{name} dimension {a.shape[0]} exceeds {MAX_DIM}")
    if not is_hermitian(a):
        raise LinalgError(f"{name} is not Hermitian")
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise LinalgError(f"{name} has trace {tr}, expected 1")
    w = np.linalg.eigvalsh((a + dagger(a)) / 2)
    if w.min() < -tol:
        raise LinalgError(f"{name} is not positive semidefinite (min eigenvalue {w.min():.3e})")
    return a


def density_spectrum(rho) -> np.ndarray:
    """Eigenvalues of a density matrix, descending, clamped at 0."""
    w = hermitian_eig(validate_density(rho)).eigenvalues
    return np.clip(w, 0.0, None)


def _check_dims(n: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or prod(dims) != n:
        raise LinalgError(f"dims {dims} do not match matrix dimension {n}")
    return dims


def partial_trace(rho, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Trace out the parties listed in ``traced``; kept parties stay in order."""
    a = as_matrix(rho)
    if a.shape[0] != a.shape[1]:
        raise LinalgError("partial_trace needs a square matrix")
    dims = _check_dims(a.shape[0], dims)
    traced = sorted(set(int(i) for i in traced))
    if any(i < 0 or i >= len(dims) for i in traced):
        raise LinalgError(f"traced parties {traced} out of range for {len(dims)} parties")
    keep = [i for i in range(len(dims)) if i not in traced]
    n = len(dims)
    t = a.reshape(dims + dims)
    perm = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    t = t.transpose(perm)
    dk = prod(dims[i] for i in keep)
    dt = prod(dims[i] for i in traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def reduce_to(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    keep = set(keep)
    return partial_trace(rho, dims, [i for i in range(len(dims)) if i not in keep])


def permute_parties(vec_or_rho, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that party ``order[k]`` becomes party ``k``."""
    a = np.asarray(vec_or_rho, dtype=complex)
    dims = tuple(dims)
    order = list(order)
    n = len(dims)
    d = prod(dims)
    if a.ndim == 1:
        return a.reshape(dims).transpose(order).reshape(d)
    t = a.reshape(dims + dims).transpose(order + [n + i for i in order])
    return t.reshape(d, d)


@dataclass(frozen=True)
class Schmidt:
    coefficients: np.ndarray
    vectors_a: np.ndarray  # columns
    vectors_b: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        return np.einsum("r,ir,jr->ij", self.coefficients, self.vectors_a, self.vectors_b).reshape(-1)


def _phase_fix(u: np.ndarray) -> complex:
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    if nz.size == 0:
        return 1.0
    z = u[nz[0]]
    return z / abs(z)


def schmidt_decompose(psi, dim_a: int, dim_b: int, tol: float = NORM_TOL) -> Schmidt:
    """Schmidt form |psi> = sum_r a_r |u_r>|v_r> with a_r > 0 descending.

    Each A-side vector is phase-fixed so its first nonzero component is real
    positive; degenerate coefficients are ordered lexicographically by the
    phase-fixed A-side vector.
    """
    v = ket(psi)
    if v.size != dim_a * dim_b:
        raise LinalgError(f"vector length {v.size} != {dim_a}*{dim_b}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise LinalgError(f"state is not normalized (norm {norm})")
    u, s, vh = np.linalg.svd(v.reshape(dim_a, dim_b), full_matrices=False)
    keep = s > 1e-14
    u, s, vb = u[:, keep], s[keep], vh[keep, :].T
    for r in range(s.size):
        ph = _phase_fix(u[:, r])
        u[:, r] /= ph
        vb[:, r] *= ph

    def key(r):
        comps = []
        for z in u[:, r]:
            comps.extend((-round(z.real, 10), -round(z.imag, 10)))
        return (-round(float(s[r]), 10), tuple(comps))

    order = sorted(range(s.size), key=key)
    return Schmidt(s[order], u[:, order], vb[:, order])


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) (not squared)."""
    a = validate_density(rho, name="rho")
    b = validate_density(sigma, name="sigma")
    if a.shape != b.shape:
        raise LinalgError("fidelity arguments differ in dimension")
    ra = sqrtm_psd(a)
    w = np.linalg.eigvalsh(ra @ b @ ra)
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))))
    if f > 1.0 + 1e-9:
        raise LinalgError(f"fidelity {f} exceeds 1")
    return min(f, 1.0)


def trace_distance(rho, sigma) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))
    return 0.5 * float(np.sum(np.abs(w)))


def hs_norm_sq(m) -> float:
    m = np.asarray(m)
    return float(np.real(np.vdot(m, m)))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
