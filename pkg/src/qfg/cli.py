"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed input, 2 a valid file that
fails a precondition (partition mismatch, invalid channel, ...), 3 failing
property suites.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import channels, entanglement, linalg, properties, statemodel, thermo
from .entropy import (
    EntropyError,
    qfg_conditional,
    qfg_entropy,
    qfg_mutual_information,
    vn_mutual_conditional,
    von_neumann,
)
from .statemodel import Partition, StateError, StateFormatError, as_partition, flatten

SEED_ENV = "QFG_SEED"

VALIDATION_ERRORS = (
    StateError,
    EntropyError,
    linalg.LinalgError,
    entanglement.EntanglementError,
    channels.ChannelError,
    thermo.ThermoError,
)


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _read(path: str, loader):
    try:
        return loader(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except IsADirectoryError:
        raise InputError(f"{path}: is a directory") from None
    except StateFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _partition(spec: str | None, n: int, default: str = "trivial") -> Partition:
    if spec is None:
        return Partition.trivial(n) if default == "trivial" else Partition.singletons(n)
    return as_partition(spec, n)


def _party_dims(state, group) -> list[int]:
    return [state.dims[i] for i in group]


def _vn_group(rho, dims, parties) -> float:
    return von_neumann(linalg.reduce_to(rho, dims, sorted(parties)))


# ---------------------------------------------------------------------------
# commands; each returns a result document (plain JSON types)


def cmd_entropy(args) -> dict:
    state = _read(args.state, statemodel.load)
    p = _partition(args.partition, len(state.dims))
    rho = flatten(state)
    rows = [{"subsystem": "whole", "qfg": qfg_entropy(state, p), "von_neumann": von_neumann(rho)}]
    if p.m > 1:
        for k, g in enumerate(p.groups):
            rows.append({"subsystem": _label(g), "qfg": qfg_entropy(state, p, keep=k), "von_neumann": _vn_group(rho, state.dims, g)})
    return {"command": "entropy", "partition": str(p), "rows": _frame(rows, args.framework)}


def _label(group) -> str:
    return "".join(chr(65 + i) for i in sorted(group))


def _frame(rows, framework):
    drop = {"qfg": "von_neumann", "von_neumann": "qfg"}.get(framework)
    return [{k: v for k, v in r.items() if k != drop} for r in rows]


def cmd_mutual(args) -> dict:
    state = _read(args.state, statemodel.load)
    p = _partition(args.partition, len(state.dims), default="singletons")
    doc = {"command": "mutual", "partition": str(p)}
    if args.framework in ("qfg", "both"):
        doc["qfg"] = qfg_mutual_information(state, p).as_dict()
        del doc["qfg"]["partition"]
    if args.framework in ("von_neumann", "both"):
        rho = flatten(state)
        whole = _vn_group(rho, state.dims, p.parties)
        doc["von_neumann"] = {"total": sum(_vn_group(rho, state.dims, g) for g in p.groups) - whole}
    return doc


def cmd_conditional(args) -> dict:
    state = _read(args.state, statemodel.load)
    p = _partition(args.partition, len(state.dims), default="singletons")
    if p.m != 2:
        raise EntropyError(f"conditional entropy needs a bipartite partition, got {p}")
    given = {"A": 0, "B": 1, "0": 0, "1": 1}.get(args.given.upper())
    if given is None:
        raise EntropyError("--given must name group A or B of the partition")
    doc = {"command": "conditional", "partition": str(p), "given": "AB"[given]}
    if args.framework in ("qfg", "both"):
        doc["qfg"] = qfg_conditional(state, p, given=given)
    if args.framework in ("von_neumann", "both"):
        rho = flatten(state)
        doc["von_neumann"] = _vn_group(rho, state.dims, p.parties) - _vn_group(rho, state.dims, p.groups[given])
    return doc


def _bipartite_rho(state, spec):
    p = _partition(spec, len(state.dims), default="singletons")
    if p.m != 2:
        raise EntropyError(f"a bipartite partition is required, got {p}")
    rho = flatten(state)
    order = list(p.groups[0]) + list(p.groups[1])
    keep = sorted(order)
    rho = linalg.reduce_to(rho, state.dims, keep)
    sub = [state.dims[i] for i in keep]
    rho = linalg.permute_parties(rho, sub, [keep.index(i) for i in order])
    da = int(np.prod(_party_dims(state, p.groups[0])))
    return p, rho, (da, rho.shape[0] // da)


def cmd_discord(args) -> dict:
    state = _read(args.state, statemodel.load)
    p, rho, dims = _bipartite_rho(state, args.partition)
    doc = {"command": "discord", "partition": str(p), "measured": args.measured}
    fns = {
        "quantum": entanglement.quantum_discord,
        "geometric": entanglement.geometric_discord,
        "relative": entanglement.relative_entropy_of_discord,
    }
    kinds = list(fns) if args.kind == "all" else [args.kind]
    for k in kinds:
        doc[k] = fns[k](rho, dims, measured=args.measured, grid=(args.grid, 2 * args.grid))
    return doc


def cmd_eof(args) -> dict:
    state = _read(args.state, statemodel.load)
    p, rho, dims = _bipartite_rho(state, args.partition)
    res = entanglement.eof_search(rho, dims, restarts=args.restarts, seed=args.seed)
    doc = {"command": "eof", "partition": str(p), "seed": args.seed, "eof_numeric": res.value}
    if dims == (2, 2):
        doc["eof_wootters"] = entanglement.eof_wootters(rho)
        doc["concurrence"] = entanglement.concurrence_wootters(rho)
    if p.parties == frozenset(range(len(state.dims))):
        doc["quantum_part_given_decomposition"] = entanglement.quantum_part_given_decomposition(state, p)
    return doc


def cmd_capacity(args) -> dict:
    ch = _read(args.channel, channels.load_channel)
    if isinstance(ch, channels.ClassicalChannel):
        return {"command": "capacity", "channel": "classical", "classical_capacity": channels.classical_capacity(ch, args.tol)}
    cfg = channels.SearchConfig(level=args.level, family=args.family)
    doc = {"command": "capacity", "channel": ch.name}
    doc["holevo_capacity"] = channels.holevo_capacity(ch, cfg).as_dict()
    q = channels.qfg_quantum_capacity(ch, cfg)
    doc["qfg_quantum_capacity"] = q.as_dict()
    doc["coherent_information_maximally_mixed"] = channels.coherent_information(ch, np.eye(ch.in_dim) / ch.in_dim)
    return doc


def cmd_thermo(args) -> dict:
    fam = _read(args.family, thermo.load_family)
    r = thermo.temperatures(fam, args.t, args.dt, args.denom_floor, coarse_grained=args.coarse_grained)
    return {"command": "thermo", "t": args.t, "dt": args.dt, **r.as_dict()}


def cmd_properties(args) -> dict:
    names = args.suite or list(properties.SUITES)
    unknown = [n for n in names if n not in properties.SUITES]
    if unknown:
        raise StateError(f"unknown suites {unknown}; choose from {sorted(properties.SUITES)}")
    results = properties.run_all(args.instances, args.seed, names)
    return {
        "command": "properties",
        "seed": args.seed,
        "instances": args.instances,
        "suites": [{"name": r.name, "passed": r.passed, "failed": r.failed, "first_failure": r.first_failure} for r in results],
        "failed": sum(r.failed for r in results),
    }


def _canned_args(raw: list[str]):
    out = []
    for a in raw:
        try:
            out.append(float(a))
        except ValueError:
            out.append(a)
    return out


def cmd_canned(args) -> dict:
    if args.name is None or args.name == "list":
        return {"command": "canned", "available": sorted(statemodel.CANNED)}
    state = statemodel.canned_state(args.name, *_canned_args(args.args))
    doc = {"command": "canned", "name": args.name, "parties": list(state.dims)}
    if args.out:
        statemodel.save(state, args.out)
        doc["written"] = str(args.out)
    else:
        doc["state"] = statemodel.to_dict(state)
    return doc


COMMANDS = {
    "entropy": cmd_entropy,
    "mutual": cmd_mutual,
    "conditional": cmd_conditional,
    "discord": cmd_discord,
    "eof": cmd_eof,
    "capacity": cmd_capacity,
    "thermo": cmd_thermo,
    "properties": cmd_properties,
    "canned": cmd_canned,
}


# ---------------------------------------------------------------------------
# formatting


def _fmt(v) -> str:
    if v is None:
        return "undefined"
    if isinstance(v, float):
        out = f"{v:.6f}"
        return "0.000000" if out == "-0.000000" else out
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def render_table(doc: dict) -> str:
    lines = []
    if "rows" in doc:
        cols = list(doc["rows"][0])
        lines.append(f"partition {doc['partition']}")
        lines.append("  ".join(f"{c:>12}" for c in cols))
        for r in doc["rows"]:
            lines.append("  ".join(f"{_fmt(r[c]):>12}" for c in cols))
        return "\n".join(lines)
    if doc.get("command") == "properties":
        for s in doc["suites"]:
            status = "PASS" if s["failed"] == 0 else "FAIL"
            lines.append(f"{status}  {s['name']:<30} {s['passed']:>4} passed {s['failed']:>4} failed")
            if s["first_failure"]:
                lines.append(f"      {s['first_failure']}")
        return "\n".join(lines)

    def walk(prefix, obj):
        for k, v in obj.items():
            if k == "command":
                continue
            if isinstance(v, dict):
                walk(f"{prefix}{k}.", v)
            else:
                lines.append(f"{prefix + k:<40} {_fmt(v)}")

    walk("", doc)
    return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfg", description="Fine-grained and von Neumann entropy toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable result document")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    def state_cmd(name, help_, default_framework="both"):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--state", required=True, help="state file")
        p.add_argument("--partition", help='partition such as "AB|CD"')
        p.add_argument("--framework", choices=["qfg", "von_neumann", "both"], default=default_framework)
        return p

    state_cmd("entropy", "entropy of a state and of each partition group")
    state_cmd("mutual", "(n,m)-mutual information with classical/quantum split")
    p = state_cmd("conditional", "conditional entropy of a bipartition")
    p.add_argument("--given", default="B", help="group conditioned on (A or B)")

    p = sub.add_parser("discord", parents=[common], help="discord-type quantities of a bipartition")
    p.add_argument("--state", required=True)
    p.add_argument("--partition")
    p.add_argument("--measured", choices=["A", "B"], default="B")
    p.add_argument("--kind", choices=["quantum", "geometric", "relative", "all"], default="quantum")
    p.add_argument("--grid", type=int, default=31, help="theta grid size; phi uses twice as many points")

    p = sub.add_parser("eof", parents=[common], help="numerical entanglement of formation")
    p.add_argument("--state", required=True)
    p.add_argument("--partition")
    p.add_argument("--restarts", type=int, default=16)

    p = sub.add_parser("capacity", parents=[common], help="channel capacities")
    p.add_argument("--channel", required=True, help="channel file")
    p.add_argument("--level", type=int, default=3, help="nested search grid level")
    p.add_argument("--family", choices=["pure", "mixtures", "both"], default="both")
    p.add_argument("--tol", type=float, default=1e-9, help="Blahut-Arimoto stopping gap")

    p = sub.add_parser("thermo", parents=[common], help="first law and temperatures of a family")
    p.add_argument("--family", required=True, help="family file")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--denom-floor", type=float, default=thermo.DENOM_FLOOR)
    p.add_argument("--coarse-grained", action="store_true", help="zero the sector entropies")

    p = sub.add_parser("properties", parents=[common], help="run the randomized invariant suites")
    p.add_argument("--instances", type=int, default=properties.DEFAULT_INSTANCES)
    p.add_argument("--suite", action="append", help="suite name (repeatable); default all")

    p = sub.add_parser("canned", parents=[common], help="write a built-in state to a file")
    p.add_argument("name", nargs="?", help="canned state name, or 'list'")
    p.add_argument("args", nargs="*", help="numeric parameters, e.g. 0.5 for werner")
    p.add_argument("--out", type=Path, help="output state file")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        doc = _jsonable(COMMANDS[args.command](args))
    except InputError as exc:
        print(f"qfg: error: {exc}", file=sys.stderr)
        return 1
    except VALIDATION_ERRORS as exc:
        print(f"qfg: invalid input: {exc}", file=sys.stderr)
        return 2
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        print(render_table(doc))
    if args.command == "properties" and doc["failed"]:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
