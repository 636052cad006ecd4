"""Brute-force oracles and seeded generators.

These live in the library (not only in the test suite) so that ``intres check``
can rerun them on user input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import fflinalg as ff
from .module import (
    PersistenceModule,
    direct_sum,
    hom_basis,
    interval_module,
    scramble,
    submodule_generated,
    zero_module,
)
from .poset import Interval, IntervalPoset, Poset, bits, make_interval, subset_scan_intervals


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def oracle_intervals(P: Poset) -> set[Interval]:
    """Every connected convex subset, found by checking all ``2^|P|`` subsets."""
    if P.n > 16:
        raise ValueError("subset scan is limited to posets with at most 16 elements")
    return {Interval(tuple(bits(m))) for m in subset_scan_intervals(P, limit=16)}


# -- planted interval-decomposables ----------------------------------------------


@dataclass(frozen=True)
class PlantedModule:
    multiplicities: dict[Interval, int]
    module: PersistenceModule
    seed: int | None


def planted_module(P: Poset, mults: Mapping[Interval, int], p: int = 2, seed=None, shuffle: bool = True) -> PersistenceModule:
    """``(+)_J V_J^{m_J}``, conjugated by random vertex automorphisms when ``shuffle``."""
    parts = []
    for iv, m in mults.items():
        parts.extend([interval_module(P, iv, p)] * int(m))
    M = direct_sum(parts, P, p)
    return scramble(M, _rng(seed)) if shuffle else M


def plant(ip: IntervalPoset, budget: int, seed: int = 0, p: int = 2, max_mult: int = 2) -> PlantedModule:
    """Random multiplicities on at most ``budget`` distinct intervals, then scrambled."""
    rng = np.random.default_rng(seed)
    mults: dict[Interval, int] = {}
    if budget > 0 and len(ip):
        count = int(rng.integers(1, budget + 1))
        for k in rng.choice(len(ip), size=min(count, len(ip)), replace=False):
            mults[ip[int(k)]] = int(rng.integers(1, max_mult + 1))
    mults = dict(sorted(mults.items(), key=lambda kv: kv[0].members))
    return PlantedModule(mults, planted_module(ip.poset, mults, p, rng), seed)


# -- generic commutative modules ---------------------------------------------------


def random_module(P: Poset, dims, seed=None, p: int = 2) -> PersistenceModule:
    """A uniformly random representation with the given dimension vector.

    Vertices are filled in topological order. The arrows into ``v`` are
    unknowns subject to the linear commutativity constraints against the
    already fixed arrows, and a uniform element of that solution space is
    drawn. Every commutative representation with these dims has positive
    probability, though the law is not uniform over all of them.
    """
    rng = _rng(seed)
    dims = [int(d) for d in dims]
    maps: dict[tuple[int, int], np.ndarray] = {}
    paths: dict[tuple[int, int], np.ndarray] = {}

    def path(x, y):
        if x == y:
            return ff.identity(dims[x])
        return paths[(x, y)]

    for v in P.topo_order:
        preds = list(P.pred[v])
        if not preds:
            continue
        sizes = [dims[v] * dims[u] for u in preds]
        offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        rows = []
        for a in range(len(preds)):
            for b in range(a + 1, len(preds)):
                ua, ub = preds[a], preds[b]
                for x in bits(P.down_mask[ua] & P.down_mask[ub]):
                    if dims[x] == 0 or dims[v] == 0:
                        continue
                    r = ff.zeros(dims[v] * dims[x], offs[-1])
                    # vec_r(A B) = kron(I, B^T) vec_r(A)
                    r[:, offs[a] : offs[a + 1]] = np.kron(ff.identity(dims[v]), path(x, ua).T)
                    r[:, offs[b] : offs[b + 1]] = (-np.kron(ff.identity(dims[v]), path(x, ub).T)) % p
                    rows.append(r % p)
        if offs[-1] == 0:
            sol = ff.zeros(0, 1)
        elif rows:
            ker = ff.kernel_basis(np.vstack(rows), p)
            sol = ff.matmul(ker, ff.random_matrix(rng, ker.shape[1], 1, p), p) if ker.shape[1] else ff.zeros(offs[-1], 1)
        else:
            sol = ff.random_matrix(rng, offs[-1], 1, p)
        for a, u in enumerate(preds):
            maps[(u, v)] = sol[offs[a] : offs[a + 1], 0].reshape(dims[v], dims[u]).copy()
        # extend the path cache to v
        for x in bits(P.down_mask[v] & ~(1 << v)):
            for u in preds:
                if P.leq(x, u):
                    paths[(x, v)] = ff.matmul(maps[(u, v)], path(x, u), p)
                    break
    return PersistenceModule(P, dims, maps, p, check=True)


def random_dims(P: Poset, max_dim: int, seed=None) -> list[int]:
    rng = _rng(seed)
    return [int(d) for d in rng.integers(0, max_dim + 1, size=P.n)]


def perturbed_module(P: Poset, max_dim: int = 2, seed=None, p: int = 2) -> PersistenceModule:
    """Random dims in ``[0, max_dim]`` and random commuting arrows."""
    rng = _rng(seed)
    return random_module(P, random_dims(P, max_dim, rng), rng, p)


def oracle_submodule(P: Poset, I: Interval, seed=None, p: int = 2, max_gens: int = 3) -> PersistenceModule:
    """Submodule of ``V_I`` generated by a few random vertices of ``I``."""
    rng = _rng(seed)
    V = interval_module(P, I, p)
    count = int(rng.integers(0, max_gens + 1))
    gens = [(int(x), np.ones(1, dtype=np.int64)) for x in rng.choice(I.members, size=min(count, len(I)), replace=False)]
    S, _ = submodule_generated(V, gens)
    return S


# -- brute-force top of Hom(G, M) ----------------------------------------------


def oracle_top(M: PersistenceModule, ip: IntervalPoset) -> dict[Interval, int]:
    """Minimal multiplicities from all compositions ``V_I -> V_J -> M`` with ``J != I``.

    Quadratic in the number of intervals and built on the generic Hom solver;
    meant for small posets.
    """
    P, p = M.poset, M.p
    Vs = [interval_module(P, iv, p) for iv in ip]
    H = [hom_basis(V, M) for V in Vs]
    out = {}
    for k, iv in enumerate(ip):
        dk = H[k].dimension
        if dk == 0:
            continue
        vecs = []
        for j in range(len(ip)):
            if j == k or H[j].dimension == 0:
                continue
            for a in hom_basis(Vs[k], Vs[j]).basis:
                for b in H[j].basis:
                    vecs.append((b @ a).vector())
        r = ff.rank(np.array(vecs, dtype=np.int64).T % p, p) if vecs else 0
        if dk - r:
            out[iv] = dk - r
    return out


def oracle_mobius(c: Mapping[Interval, int], ip: IntervalPoset) -> dict[Interval, int]:
    """Solve ``c(I) = sum_{J >= I} delta(J)`` by back substitution from the largest intervals."""
    order = sorted(range(len(ip)), key=lambda k: -len(ip[k]))
    delta: dict[Interval, int] = {}
    for k in order:
        iv = ip[k]
        s = c.get(iv, 0)
        for j in ip.strict_supersets(iv):
            s -= delta[j]
        delta[iv] = s
    return delta


def random_interval(ip: IntervalPoset, seed=None) -> Interval:
    rng = _rng(seed)
    return ip[int(rng.integers(0, len(ip)))]


__all__ = [
    "PlantedModule",
    "oracle_intervals",
    "oracle_mobius",
    "oracle_submodule",
    "oracle_top",
    "perturbed_module",
    "plant",
    "planted_module",
    "random_dims",
    "random_interval",
    "random_module",
    "zero_module",
    "make_interval",
]
