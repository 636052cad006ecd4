"""Compression of commutative ladder modules to a five-vertex zigzag.

The ladder ``G(n,2)`` has lower row ``x_1 -> ... -> x_n`` (second grid
coordinate 1), upper row ``y_1 -> ... -> y_n`` and vertical arrows
``x_i -> y_i``. For each interval ``I`` a quiver morphism ``xi_I`` from the
zigzag ``1 <- 2 -> 3 <- 4 -> 5`` picks five ladder vertices; restricting a
module along it and counting the summand ``V_<1,5>`` gives the compressed
multiplicity ``c(I)``, whose Moebius inversion over inclusion is ``delta``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import InputError, JoinMissing
from .module import PersistenceModule, hom_dim, thin_module
from .poset import Interval, IntervalPoset, Poset, enumerate_intervals, make_grid, make_interval

ARROWS = ("alpha1", "alpha2", "alpha3", "alpha4")
# zigzag vertex k (1-based) has id k-1; arrows as (source, target) ids
ARROW_ENDS = {"alpha1": (1, 0), "alpha2": (1, 2), "alpha3": (3, 2), "alpha4": (3, 4)}


@lru_cache(maxsize=None)
def zigzag() -> Poset:
    """The poset on ``1..5`` with ``2 < 1``, ``2 < 3``, ``4 < 3`` and ``4 < 5``."""
    return Poset(["1", "2", "3", "4", "5"], list(ARROW_ENDS.values()), kind="zigzag")


def zigzag_interval(i: int, j: int) -> int:
    """Mask of ``<i, j> = {i, ..., j}`` (1-based, inclusive)."""
    if not 1 <= i <= j <= 5:
        raise ValueError(f"<{i},{j}> is not a zigzag interval")
    return sum(1 << (v - 1) for v in range(i, j + 1))


@lru_cache(maxsize=None)
def zigzag_interval_module(i: int, j: int, p: int = 2) -> PersistenceModule:
    return thin_module(zigzag(), zigzag_interval(i, j), p)


def require_ladder(P: Poset) -> int:
    """Return ``n`` for ``P = G(n,2)``; anything else is rejected."""
    if P.kind != "grid" or P.is_opposite or P.shape is None or P.shape[1] != 2:
        raise InputError("expected a commutative ladder G(n,2)")
    return P.shape[0]


def x_vertex(P: Poset, i: int) -> int:
    return P.vertex(i, 1)


def y_vertex(P: Poset, i: int) -> int:
    return P.vertex(i, 2)


@dataclass(frozen=True)
class XiMorphism:
    """``vertex_images[k]`` is the ladder vertex hit by zigzag vertex ``k+1``;
    ``arrow_images[a]`` is the segment ``(start, end)`` an arrow is sent to."""

    interval: Interval
    vertex_images: tuple[int, int, int, int, int]
    arrow_images: dict

    def labels(self, P: Poset) -> tuple[str, ...]:
        return tuple(P.labels[v] for v in self.vertex_images)


def _rows(P: Poset, I: Interval) -> dict[int, tuple[int, int]]:
    rows: dict[int, list[int]] = {}
    for v in I.members:
        i, j = P.coords(v)
        rows.setdefault(j, []).append(i)
    return {j: (min(c), max(c)) for j, c in rows.items()}


def xi(I: Interval, P: Poset) -> XiMorphism:
    """The quiver morphism attached to ``I``.

    Two-row ``I = [x_i, x_j]_1 + [y_k, y_l]_2`` goes to ``(y_l, y_k, y_i, x_i, x_j)``;
    a lower-row ``[x_i, x_j]`` to ``(x_j, x_i, x_i, x_i, x_j)`` and an upper-row
    ``[y_k, y_l]`` to ``(y_l, y_k, y_k, y_k, y_l)``. Empty paths become identities.
    """
    require_ladder(P)
    if not P.is_interval(I.mask):
        raise InputError("not an interval of this ladder")
    rows = _rows(P, I)
    if 1 in rows and 2 in rows:
        i, j = rows[1]
        k, l = rows[2]
        imgs = (y_vertex(P, l), y_vertex(P, k), y_vertex(P, i), x_vertex(P, i), x_vertex(P, j))
    elif 1 in rows:
        i, j = rows[1]
        imgs = (x_vertex(P, j), x_vertex(P, i), x_vertex(P, i), x_vertex(P, i), x_vertex(P, j))
    else:
        k, l = rows[2]
        imgs = (y_vertex(P, l), y_vertex(P, k), y_vertex(P, k), y_vertex(P, k), y_vertex(P, l))
    arrows = {a: (imgs[s], imgs[t]) for a, (s, t) in ARROW_ENDS.items()}
    for a, (s, t) in arrows.items():
        if not P.leq(s, t):
            raise AssertionError(f"{a} image is not a path")
    return XiMorphism(I, imgs, arrows)


def compress(M: PersistenceModule, I: Interval, morphism: XiMorphism | None = None) -> PersistenceModule:
    """``R_I(M) = M o F_I`` as a module over :func:`zigzag`."""
    P = M.poset
    m = morphism if morphism is not None else xi(I, P)
    dims = [M.dims[v] for v in m.vertex_images]
    maps = {ARROW_ENDS[a]: M.path_map(s, t) for a, (s, t) in m.arrow_images.items()}
    return PersistenceModule(zigzag(), dims, maps, M.p, check=False)


def zigzag_top_multiplicity(N: PersistenceModule) -> int:
    """Multiplicity of ``V_<1,5>`` in ``N``.

    Uses the almost split sequence ``0 -> V_<1,5> -> V_<2,5> + V_<1,4> -> V_<2,4> -> 0``:
    the alternating sum of ``dim Hom(-, N)`` over its terms.
    """
    if N.poset != zigzag():
        raise ValueError("expected a module over the five-vertex zigzag")
    p = N.p
    h = lambda i, j: hom_dim(zigzag_interval_module(i, j, p), N)  # noqa: E731
    return h(1, 5) - h(2, 5) - h(1, 4) + h(2, 4)


def compressed_multiplicity(M: PersistenceModule, I: Interval) -> int:
    """``c(I)``: the multiplicity of ``V_<1,5>`` in ``R_I(M)``."""
    return zigzag_top_multiplicity(compress(M, I))


@dataclass
class CompressedProfile:
    c: dict[Interval, int]
    delta: dict[Interval, int]


def moebius_delta(c: dict[Interval, int], ip: IntervalPoset) -> dict[Interval, int]:
    """``delta(J) = sum_{S subset cov(J)} (-1)^|S| c(join(S + {J}))``."""
    delta = {}
    for J in ip:
        covers = ip.covers(J)
        total = 0
        for r in range(len(covers) + 1):
            sign = -1 if r % 2 else 1
            for S in combinations(covers, r):
                top = ip.join((J,) + S)
                if top is None:
                    raise JoinMissing(f"no join for {J.members} with covers {[s.members for s in S]}")
                total += sign * c[top]
        delta[J] = total
    return delta


def _c_chunk(args):
    M, intervals = args
    return [compressed_multiplicity(M, I) for I in intervals]


def interval_approximation_delta(M: PersistenceModule, ip: IntervalPoset | None = None, jobs: int = 1) -> CompressedProfile:
    """``c`` on every interval and its Moebius inversion ``delta``.

    With ``jobs > 1`` the values of ``c`` are computed in worker processes.
    """
    require_ladder(M.poset)
    if ip is None:
        ip = ladder_intervals(M.poset.shape[0])
    ivs = list(ip)
    if jobs > 1 and len(ivs) > 1:
        chunks = [ivs[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_c_chunk, [(M, ch) for ch in chunks]))
        c = {}
        for ch, vals in zip(chunks, parts):
            c.update(zip(ch, vals))
        c = {I: c[I] for I in ivs}
    else:
        c = {I: compressed_multiplicity(M, I) for I in ivs}
    return CompressedProfile(c, moebius_delta(c, ip))


@lru_cache(maxsize=None)
def ladder_intervals(n: int) -> IntervalPoset:
    return enumerate_intervals(make_grid(n, 2))


def ladder_interval(P: Poset, lower: tuple[int, int] | None, upper: tuple[int, int] | None) -> Interval:
    """``[x_i, x_j]_1 + [y_k, y_l]_2`` from ``lower = (i, j)`` and ``upper = (k, l)``."""
    require_ladder(P)
    members = []
    if lower is not None:
        members += [x_vertex(P, t) for t in range(lower[0], lower[1] + 1)]
    if upper is not None:
        members += [y_vertex(P, t) for t in range(upper[0], upper[1] + 1)]
    return make_interval(P, members)


def example_module(p: int = 2) -> PersistenceModule:
    """A module over ``G(4,2)`` with dims ``y = (1,2,1,0)`` and ``x = (0,1,2,1)``.

    Its compressed multiplicity is 0 at ``[x_2,x_3]_1 + [y_1,y_3]_2`` and 1 at
    ``[x_2,x_4]_1 + [y_2,y_3]_2``.
    """
    P = make_grid(4, 2)
    x = lambda i: x_vertex(P, i)  # noqa: E731
    y = lambda i: y_vertex(P, i)  # noqa: E731
    dims = [0] * P.n
    for i, d in enumerate((0, 1, 2, 1), start=1):
        dims[x(i)] = d
    for i, d in enumerate((1, 2, 1, 0), start=1):
        dims[y(i)] = d
    A = lambda rows: np.array(rows, dtype=np.int64)  # noqa: E731
    maps = {
        (y(1), y(2)): A([[1], [1]]),
        (y(2), y(3)): A([[0, 1]]),
        (x(2), x(3)): A([[1], [0]]),
        (x(3), x(4)): A([[1, 1]]),
        (x(2), y(2)): A([[0], [1]]),
        (x(3), y(3)): A([[1, 0]]),
    }
    return PersistenceModule(P, dims, maps, p)


__all__ = [
    "ARROWS",
    "CompressedProfile",
    "XiMorphism",
    "compress",
    "compressed_multiplicity",
    "example_module",
    "interval_approximation_delta",
    "ladder_interval",
    "ladder_intervals",
    "moebius_delta",
    "require_ladder",
    "xi",
    "zigzag",
    "zigzag_interval",
    "zigzag_interval_module",
    "zigzag_top_multiplicity",
]
