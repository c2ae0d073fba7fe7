"""First law and temperatures for parameterized ensembles.

A family gives, at every parameter value t, the mixing weights p_i, the
per-sector occupations lambda_ki and level energies e_ki.  Entropies are in
bits, so the Gibbs preset uses lambda ~ 2^(-e/t) to make temperature and t
share units.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import softmax

from .entropy import _h
from .statemodel import StateFormatError

PROB_TOL = 1e-9
DENOM_FLOOR = 1e-9


class ThermoError(ValueError):
    pass


@dataclass(frozen=True)
class Sample:
    p: np.ndarray
    lam: tuple[np.ndarray, ...]
    e: tuple[np.ndarray, ...]

    @property
    def sector_energies(self) -> np.ndarray:
        return np.array([float(np.dot(l, e)) for l, e in zip(self.lam, self.e)])

    @property
    def sector_entropies(self) -> np.ndarray:
        return np.array([_h(l) for l in self.lam])

    @property
    def energy(self) -> float:
        return float(np.dot(self.p, self.sector_energies))

    def qfg_entropy(self, coarse_grained: bool = False) -> float:
        if coarse_grained:
            return _h(self.p)
        return _h(self.p) + float(np.dot(self.p, self.sector_entropies))


def _prob(v, what: str, t: float) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.size == 0 or not np.all(np.isfinite(a)) or np.any(a < -PROB_TOL) or abs(a.sum() - 1) > PROB_TOL:
        raise ThermoError(f"{what} at t={t} is not a probability vector: {a.tolist()}")
    return np.clip(a, 0.0, None)


class ThermoFamily:
    """Callables t -> p, t -> [lambda_i], t -> [e_i]."""

    def __init__(self, p: Callable, lam: Callable, e: Callable, name: str = "family"):
        self._p, self._lam, self._e = p, lam, e
        self.name = name

    def sample(self, t: float) -> Sample:
        p = _prob(self._p(t), "p", t)
        lam = tuple(_prob(l, f"lambda[{i}]", t) for i, l in enumerate(self._lam(t)))
        e = tuple(np.asarray(x, dtype=float).reshape(-1) for x in self._e(t))
        if len(lam) != p.size or len(e) != p.size:
            raise ThermoError(f"family at t={t} has {p.size} weights, {len(lam)} occupation and {len(e)} energy vectors")
        for i, (l, x) in enumerate(zip(lam, e)):
            if l.size != x.size:
                raise ThermoError(f"sector {i} at t={t}: {l.size} occupations but {x.size} energies")
            if not np.all(np.isfinite(x)):
                raise ThermoError(f"sector {i} energies at t={t} are not finite")
        return Sample(p, lam, e)

    @property
    def sectors(self) -> int:
        return self.sample(0.0).p.size

    def reparameterized(self, scale: float) -> "ThermoFamily":
        """The family s -> self(scale * s)."""
        return ThermoFamily(lambda s: self._p(scale * s), lambda s: self._lam(scale * s), lambda s: self._e(scale * s), f"{self.name}@{scale}")

    @classmethod
    def constant(cls, p, lam, e) -> "ThermoFamily":
        return cls(lambda t: p, lambda t: lam, lambda t: e, "constant")

    @classmethod
    def polynomial(cls, p_logits, lam_logits, energies) -> "ThermoFamily":
        """Polynomial coefficients (increasing powers of t); weights and occupations are softmax of their logits."""
        p_c = [np.asarray(c, dtype=float) for c in p_logits]
        l_c = [[np.asarray(c, dtype=float) for c in sector] for sector in lam_logits]
        e_c = [[np.asarray(c, dtype=float) for c in sector] for sector in energies]

        def ev(c, t):
            return float(np.polynomial.polynomial.polyval(t, c))

        return cls(
            lambda t: softmax([ev(c, t) for c in p_c]),
            lambda t: [softmax([ev(c, t) for c in sector]) for sector in l_c],
            lambda t: [np.array([ev(c, t) for c in sector]) for sector in e_c],
            "polynomial",
        )

    @classmethod
    def table(cls, ts, p, lam, e) -> "ThermoFamily":
        """Cubic-spline interpolation of sampled tables indexed [t][sector][level]."""
        ts = np.asarray(ts, dtype=float)
        if ts.ndim != 1 or ts.size < 2 or np.any(np.diff(ts) <= 0):
            raise ThermoError("table t values must be strictly increasing with at least two entries")
        p_s = CubicSpline(ts, np.asarray(p, dtype=float), axis=0)
        n = np.asarray(p).shape[1]
        lam_s = [CubicSpline(ts, np.array([row[i] for row in lam], dtype=float), axis=0) for i in range(n)]
        e_s = [CubicSpline(ts, np.array([row[i] for row in e], dtype=float), axis=0) for i in range(n)]
        lo, hi = ts[0], ts[-1]

        def guard(t):
            if not lo <= t <= hi:
                raise ThermoError(f"t={t} outside the tabulated range [{lo}, {hi}]")
            return t

        return cls(lambda t: p_s(guard(t)), lambda t: [s(guard(t)) for s in lam_s], lambda t: [s(guard(t)) for s in e_s], "table")

    @classmethod
    def gibbs(cls, energies: Sequence[float]) -> "ThermoFamily":
        """One sector with lambda_k(t) proportional to 2^(-e_k / t), so T_FG -> t in bit units."""
        e = np.asarray(energies, dtype=float)

        def lam(t):
            if t <= 0:
                raise ThermoError("Gibbs family needs t > 0")
            return [softmax(-e * np.log(2) / t)]

        return cls(lambda t: np.array([1.0]), lam, lambda t: [e], "gibbs")


@dataclass(frozen=True)
class ThermoReport:
    U: float
    dU: float
    dQ: float
    dQ_classical: float
    dQ_fg: tuple[float, ...]
    dW: float
    dS_fg: float
    dS_classical: float
    dS_fg_sector: tuple[float, ...]
    T_classical: float | None = None
    T_fg: tuple[float | None, ...] = ()
    T_quantum: float | None = None
    T_quantum_expanded: float | None = None

    @property
    def residual(self) -> float:
        return self.dU - self.dQ - self.dW

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out = {k: list(v) if isinstance(v, tuple) else v for k, v in out.items()}
        out["residual"] = self.residual
        return out


def _ratio(num: float, den: float, floor: float) -> float | None:
    return None if abs(den) < floor else num / den


def first_law(fam: ThermoFamily, t: float, dt: float, coarse_grained: bool = False) -> ThermoReport:
    """Central differences x(t + dt/2) - x(t - dt/2) of every ingredient of the first law."""
    if not dt > 0:
        raise ThermoError("dt must be positive")
    lo, mid, hi = fam.sample(t - dt / 2), fam.sample(t), fam.sample(t + dt / 2)
    if lo.p.size != hi.p.size or any(a.size != b.size for a, b in zip(lo.lam, hi.lam)):
        raise ThermoError("family changes shape across the difference stencil")
    dp = hi.p - lo.p
    dlam = [b - a for a, b in zip(lo.lam, hi.lam)]
    de = [b - a for a, b in zip(lo.e, hi.e)]
    dq_c = float(np.dot(mid.sector_energies, dp))
    dq_fg = tuple(float(np.dot(e, d)) for e, d in zip(mid.e, dlam))
    dq = dq_c + float(np.dot(mid.p, dq_fg))
    dw = float(sum(pi * np.dot(l, d) for pi, l, d in zip(mid.p, mid.lam, de)))
    du = hi.energy - lo.energy
    limit = 10 * dt * dt + 1e-10
    if abs(du - dq - dw) > limit:
        raise ThermoError(f"first-law residual {du - dq - dw:.3g} exceeds {limit:.3g} at t={t}; the family is not smooth enough for dt={dt}")
    ds_c = _h(hi.p) - _h(lo.p)
    if coarse_grained:
        ds_sector = tuple(0.0 for _ in mid.lam)
    else:
        ds_sector = tuple(float(b - a) for a, b in zip(lo.sector_entropies, hi.sector_entropies))
    ds = hi.qfg_entropy(coarse_grained) - lo.qfg_entropy(coarse_grained)
    return ThermoReport(mid.energy, du, dq, dq_c, dq_fg, dw, ds, ds_c, ds_sector)


def temperatures(fam: ThermoFamily, t: float, dt: float, denom_floor: float = DENOM_FLOOR, coarse_grained: bool = False) -> ThermoReport:
    """Classical, per-sector and total temperatures.

    T_q is the primitive ratio dQ / dS_FG.  ``T_quantum_expanded`` is the
    same quantity assembled from T_c and the T_FG^i, kept for comparison; it
    is undefined whenever one of its ingredients is.  ``coarse_grained``
    zeroes the sector entropies and their changes.
    """
    r = first_law(fam, t, dt, coarse_grained)
    mid = fam.sample(t)
    s_sector = np.zeros(mid.p.size) if coarse_grained else mid.sector_entropies
    t_c = _ratio(r.dQ_classical, r.dS_classical, denom_floor)
    t_fg = tuple(_ratio(q, s, denom_floor) for q, s in zip(r.dQ_fg, r.dS_fg_sector))
    t_q = _ratio(r.dQ, r.dS_fg, denom_floor)

    dp = fam.sample(t + dt / 2).p - fam.sample(t - dt / 2).p
    num = 0.0
    expanded = None
    ok = True
    if abs(r.dS_classical) >= denom_floor:
        num += r.dS_classical * t_c
    elif abs(r.dQ_classical) >= denom_floor:
        ok = False
    for i, (tf, ds) in enumerate(zip(t_fg, r.dS_fg_sector)):
        if tf is not None:
            num += tf * mid.p[i] * ds
        elif abs(r.dQ_fg[i]) >= denom_floor:
            ok = False
    den = r.dS_classical + float(np.dot(s_sector, dp)) + float(np.dot(mid.p, r.dS_fg_sector))
    if ok:
        expanded = _ratio(float(num), den, denom_floor)
    return ThermoReport(
        **{k: getattr(r, k) for k in ("U", "dU", "dQ", "dQ_classical", "dQ_fg", "dW", "dS_fg", "dS_classical", "dS_fg_sector")},
        T_classical=t_c,
        T_fg=t_fg,
        T_quantum=t_q,
        T_quantum_expanded=expanded,
    )


def family_from_dict(doc) -> ThermoFamily:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise StateFormatError("<root>: expected an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "polynomial":
            return ThermoFamily.polynomial(doc["p"], doc["lambda"], doc["energies"])
        if kind == "table":
            return ThermoFamily.table(doc["t"], doc["p"], doc["lambda"], doc["energies"])
        if kind == "gibbs":
            return ThermoFamily.gibbs(doc["energies"])
    except KeyError as exc:
        raise StateFormatError(f"{kind}: missing field {exc.args[0]!r}") from None
    except (ThermoError, TypeError, ValueError) as exc:
        raise StateFormatError(f"{kind}: {exc}") from None
    raise StateFormatError(f"kind: unknown family kind {kind!r}; choose polynomial, table or gibbs")


def load_family(path) -> ThermoFamily:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return family_from_dict(doc)
