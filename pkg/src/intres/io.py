"""JSON encodings of posets, intervals, modules, resolutions and profiles.

Vertices are referred to by label everywhere (grid labels are ``"i,j"``).
Encoders return plain ``dict``/``list`` trees with deterministic key order.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import fflinalg as ff
from .errors import InputError
from .module import CommutativityError, PersistenceModule
from .poset import Interval, IntervalPoset, Poset, make_chain, make_grid, make_interval


# -- posets -------------------------------------------------------------------


def poset_to_json(P: Poset) -> dict:
    if P.kind == "grid" and not P.is_opposite:
        return {"kind": "grid", "m": P.shape[0], "n": P.shape[1]}
    if P.kind == "chain" and not P.is_opposite:
        return {"kind": "chain", "n": P.n}
    return {
        "kind": "hasse",
        "elements": list(P.labels),
        "edges": [[P.labels[a], P.labels[b]] for a, b in P.edges],
    }


def poset_from_json(obj: Any) -> Poset:
    try:
        kind = obj.get("kind", "hasse")
        if kind == "grid":
            m, n = int(obj["m"]), int(obj["n"])
            if m < 1 or n < 1:
                raise InputError("grid sides must be positive")
            return make_grid(m, n)
        if kind == "chain":
            return make_chain(int(obj["n"]))
        if kind == "hasse":
            labels = [str(x) for x in obj["elements"]]
            return Poset.from_relations(labels, [(str(a), str(b)) for a, b in obj["edges"]])
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed poset: {exc}") from exc
    raise InputError(f"unknown poset kind {kind!r}")


# -- intervals ----------------------------------------------------------------


def interval_to_json(P: Poset, I: Interval) -> dict:
    out: dict = {"members": [P.labels[x] for x in I.members]}
    if I.staircase is not None:
        out["staircase"] = [list(r) for r in I.staircase]
    return out


def interval_from_json(P: Poset, obj: Any) -> Interval:
    try:
        if isinstance(obj, dict):
            members = obj["members"]
        else:
            members = obj
        return make_interval(P, [P.index(str(x)) for x in members])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed interval: {exc}") from exc


# -- modules ------------------------------------------------------------------


def module_to_json(M: PersistenceModule) -> dict:
    P = M.poset
    return {
        "poset": poset_to_json(P),
        "field": M.p,
        "dims": {P.labels[x]: M.dims[x] for x in range(P.n)},
        "maps": {
            f"{P.labels[x]}->{P.labels[y]}": M.maps[(x, y)].tolist()
            for x, y in P.edges
            if M.dims[x] and M.dims[y]
        },
    }


def module_from_json(obj: Any, poset: Poset | None = None) -> PersistenceModule:
    try:
        P = poset if poset is not None else poset_from_json(obj["poset"])
        p = ff.check_modulus(int(obj.get("field", 2)))
        raw_dims = obj["dims"]
        if isinstance(raw_dims, dict):
            dims = [0] * P.n
            for k, d in raw_dims.items():
                dims[P.index(str(k))] = int(d)
        else:
            dims = [int(d) for d in raw_dims]
        maps = {}
        for key, mat in obj.get("maps", {}).items():
            src, _, tgt = key.partition("->")
            e = (P.index(src.strip()), P.index(tgt.strip()))
            if e not in P.edges:
                raise InputError(f"{key} is not a Hasse edge")
            a = np.asarray(mat, dtype=np.int64)
            if a.size == 0:
                a = a.reshape(dims[e[1]], dims[e[0]])
            maps[e] = a
        return PersistenceModule(P, dims, maps, p)
    except (InputError, CommutativityError):
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed module: {exc}") from exc


# -- results ------------------------------------------------------------------


def resolution_to_json(R) -> dict:
    P = R.module.poset
    return {
        "length": R.length,
        "table": [{"interval": interval_to_json(P, iv), "mults": ds} for iv, ds in R.table.items()],
        "checks": dict(sorted(R.checks.items())),
    }


def profile_to_json(P: Poset, prof, ip: IntervalPoset) -> dict:
    return {
        "c": [{"interval": interval_to_json(P, I), "value": int(prof.c[I])} for I in ip],
        "delta": [{"interval": interval_to_json(P, I), "value": int(prof.delta[I])} for I in ip],
    }


def dumps(obj: Any) -> str:
    """Canonical JSON text: fixed separators and a trailing newline."""
    return json.dumps(obj, indent=None, separators=(",", ":")) + "\n"


def load_json(path: str) -> Any:
    try:
        if path == "-":
            import sys

            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
