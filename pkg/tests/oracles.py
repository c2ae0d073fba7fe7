"""Independent reference computations used to derive frozen test values.

Nothing here imports the package under test.  Routines favour obviousness
over speed: explicit index loops, dense grids, textbook closed forms.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.linalg import logm, sqrtm

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def h2(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def shannon_loop(p) -> float:
    total = 0.0
    for x in p:
        if x > 0:
            total -= x * math.log2(x)
    return total


def entropy_from_eigvals(rho) -> float:
    # general (non-Hermitian) eigen solver on purpose
    w = np.real(np.linalg.eigvals(np.asarray(rho)))
    return shannon_loop([x for x in w if x > 1e-14])


def index_partial_trace(rho, dims, traced):
    """Partial trace by explicit summation over multi-indices."""
    dims = list(dims)
    keep = [i for i in range(len(dims)) if i not in traced]
    kd = [dims[i] for i in keep]
    td = [dims[i] for i in traced]
    out = np.zeros((int(np.prod(kd)), int(np.prod(kd))), dtype=complex)

    def flat(idx):
        f = 0
        for i, d in zip(idx, dims):
            f = f * d + i
        return f

    def kflat(idx):
        f = 0
        for i, d in zip(idx, kd):
            f = f * d + i
        return f

    for a in itertools.product(*[range(d) for d in kd]):
        for b in itertools.product(*[range(d) for d in kd]):
            s = 0.0
            for t in itertools.product(*[range(d) for d in td]):
                full_a = [0] * len(dims)
                full_b = [0] * len(dims)
                for k, i in enumerate(keep):
                    full_a[i], full_b[i] = a[k], b[k]
                for k, i in enumerate(traced):
                    full_a[i] = full_b[i] = t[k]
                s += rho[flat(full_a), flat(full_b)]
            out[kflat(a), kflat(b)] = s
    return out


def singular_values_via_eig(m) -> np.ndarray:
    w = np.linalg.eigvalsh(m.conj().T @ m)
    return np.sort(np.sqrt(np.clip(w, 0, None)))[::-1]


def relative_entropy_logm(rho, sigma) -> float:
    return float(np.real(np.trace(rho @ (logm(rho) - logm(sigma))))) / math.log(2)


def wootters_eof(rho) -> float:
    """Concurrence from the non-Hermitian product rho * spin-flipped rho."""
    yy = np.kron(Y, Y)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sort(np.sqrt(np.clip(np.real(np.linalg.eigvals(r)), 0, None)))[::-1]
    c = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return h2((1 + math.sqrt(1 - c * c)) / 2)


def bsc_grid_capacity(flip: float, step: float = 1e-4) -> float:
    best = 0.0
    for k in range(int(round(1 / step)) + 1):
        p = k * step
        q1 = p * (1 - flip) + (1 - p) * flip
        best = max(best, h2(q1) - h2(flip))
    return best


def _projector_grid(n_theta: int, n_phi: int):
    th = np.linspace(0, np.pi, n_theta)
    ph = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(th, ph, indexing="ij")
    n = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1)
    ns = np.einsum("...c,cij->...ij", n, np.stack([X, Y, Z]))
    return (I2 + ns) / 2, (I2 - ns) / 2


def _stack_entropy(m):
    w = np.clip(np.linalg.eigvalsh(m), 1e-300, None)
    return -(w * np.log2(w)).sum(axis=-1)


def discord_grid(rho, n_theta=720, n_phi=1440) -> float:
    """Measure qubit B with every grid projector pair; D = S(B) - S(AB) + min sum p S(A|i)."""
    dA = rho.shape[0] // 2
    r = rho.reshape(dA, 2, dA, 2)
    best = np.inf
    for pp, pm in zip(*_projector_grid(n_theta, n_phi)):
        cond = 0.0
        for proj in (pp, pm):
            # tr_B[(I x P) rho (I x P)] = sum_{b,b'} P_{b'b} rho[a b, a' b']
            sub = np.einsum("ibjc,...cb->...ij", r, proj)
            p = np.real(np.einsum("...ii->...", sub))
            sub = sub / np.where(p > 1e-300, p, 1.0)[..., None, None]
            cond = cond + np.where(p > 1e-300, p * _stack_entropy(sub), 0.0)
        best = min(best, float(cond.min()))
    rho_b = index_partial_trace(rho, [dA, 2], [0])
    return entropy_from_eigvals(rho_b) - entropy_from_eigvals(rho) + best


def dephased_grid(rho, objective, n_theta=181, n_phi=360) -> float:
    """Minimize objective(rho, chi) over chi = sum_i (I x P_i) rho (I x P_i)."""
    dA = rho.shape[0] // 2
    best = np.inf
    for pp, pm in zip(*_projector_grid(n_theta, n_phi)):
        for a, b in zip(pp, pm):
            chi = np.zeros_like(rho)
            for proj in (a, b):
                k = np.kron(np.eye(dA), proj)
                chi = chi + k @ rho @ k
            best = min(best, objective(rho, chi))
    return best


def hs_distance_sq(a, b) -> float:
    d = a - b
    return float(np.real(np.trace(d.conj().T @ d)))


def vn_relative_by_spectrum(rho, chi) -> float:
    # S(rho||chi) = S(chi) - S(rho) when chi is the dephased rho
    return entropy_from_eigvals(chi) - entropy_from_eigvals(rho)


def holevo_grid_qubit(kraus, n_theta=33, n_phi=64, n_w=33) -> float:
    """Brute force over pairs of pure qubit inputs and weights."""
    th = np.linspace(0, np.pi, n_theta)
    ph = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    vecs = [np.array([math.cos(t / 2), np.exp(1j * p) * math.sin(t / 2)]) for t in th for p in ph]
    outs = []
    for v in vecs:
        r = np.outer(v, v.conj())
        outs.append(sum(k @ r @ k.conj().T for k in kraus))
    ent = [entropy_from_eigvals(o) for o in outs]
    best = 0.0
    ws = np.linspace(0, 1, n_w)
    for i in range(0, len(vecs), 7):
        for j in range(len(vecs)):
            for w in ws:
                val = entropy_from_eigvals(w * outs[i] + (1 - w) * outs[j]) - w * ent[i] - (1 - w) * ent[j]
                best = max(best, val)
    return best


def fidelity_sqrtm(a, b) -> float:
    s = sqrtm(a)
    return float(np.real(np.trace(sqrtm(s @ b @ s))))


def coherent_info_dilation(kraus, rho) -> float:
    """Build the isometry column by column, act on rho x ancilla, then trace system / environment."""
    n = len(kraus)
    d_out, d_in = kraus[0].shape
    v = np.zeros((d_out * n, d_in), dtype=complex)
    for j, k in enumerate(kraus):
        for a in range(d_out):
            for b in range(d_in):
                v[a * n + j, b] = k[a, b]
    big = v @ rho @ v.conj().T
    sys_ = index_partial_trace(big, [d_out, n], [1])
    env = index_partial_trace(big, [d_out, n], [0])
    return entropy_from_eigvals(sys_) - entropy_from_eigvals(env)
