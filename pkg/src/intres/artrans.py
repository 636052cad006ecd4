"""Auslander-Reiten translates and the interval resolution global dimension.

Modules over ``P`` are modules over the incidence algebra ``kP``. The
indecomposable projective at ``x`` is the interval module on the up-set of
``x``, and ``Hom(P_x, P_y)`` is one-dimensional exactly when ``y <= x``. A
morphism between sums of projectives is therefore a scalar matrix ``lam``
whose entry ``lam[a, b]`` links generator ``a`` of the target to generator
``b`` of the source. The transpose is the cokernel of ``lam^T`` read between
projectives of the opposite poset.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import fflinalg as ff
from .approx import interval_codimension, interval_dimension
from .errors import InternalInconsistency
from .module import ModuleMorphism, PersistenceModule, cokernel, direct_sum, kernel, thin_module, zero_module
from .poset import IntervalPoset, Poset, bits, enumerate_intervals, make_grid


def _incoming(M: PersistenceModule, x: int) -> np.ndarray:
    return ff.hstack([M.maps[(z, x)] for z in M.poset.pred[x]], rows=M.dims[x])


def top_dims(M: PersistenceModule) -> list[int]:
    """``dim M(x)`` minus the dimension of the sum of images of arrows into ``x``."""
    return [M.dims[x] - ff.rank(_incoming(M, x), M.p) for x in range(M.n)]


def top_generators(M: PersistenceModule) -> list[tuple[int, np.ndarray]]:
    """Vectors ``(x, v)`` whose classes form a basis of the top, ordered by vertex."""
    p = M.p
    gens = []
    for x in range(M.n):
        d = M.dims[x]
        if d == 0:
            continue
        rad = _incoming(M, x)
        keep = ff.complement_columns(rad, ff.identity(d), p)
        for c in keep:
            gens.append((x, ff.identity(d)[:, c]))
    return gens


def free_module(P: Poset, vertices: list[int], p: int) -> PersistenceModule:
    """``(+)_a P_{vertices[a]}``; at ``y`` the basis is the ``a`` with ``vertices[a] <= y`` in order."""
    return direct_sum([thin_module(P, P.up_mask[x], p) for x in vertices], P, p)


def _free_positions(P: Poset, vertices: list[int]) -> list[dict[int, int]]:
    pos = []
    for y in range(P.n):
        row = {}
        for a, x in enumerate(vertices):
            if P.leq(x, y):
                row[a] = len(row)
        pos.append(row)
    return pos


def free_cover(M: PersistenceModule, gens: list[tuple[int, np.ndarray]]) -> tuple[PersistenceModule, ModuleMorphism]:
    """The morphism ``(+)_a P_{x_a} -> M`` sending generator ``a`` to ``v_a``."""
    P, p = M.poset, M.p
    vertices = [x for x, _ in gens]
    F = free_module(P, vertices, p)
    pos = _free_positions(P, vertices)
    comps = []
    for y in range(P.n):
        c = ff.zeros(M.dims[y], F.dims[y])
        for a, i in pos[y].items():
            x, v = gens[a]
            c[:, i] = ff.matmul(M.path_map(x, y), v.reshape(-1, 1), p)[:, 0]
        comps.append(c)
    return F, ModuleMorphism(F, M, tuple(comps))


@dataclass
class ProjectivePresentation:
    """Minimal presentation ``P1 -> P0 -> M -> 0``.

    ``p0_vertices[a]`` and ``p1_vertices[b]`` are the generator vertices;
    ``matrix[a, b]`` is the scalar of generator ``b`` of ``P1`` on generator
    ``a`` of ``P0``, nonzero only when ``p0_vertices[a] < p1_vertices[b]``.
    """

    module: PersistenceModule
    p0_vertices: list[int]
    p1_vertices: list[int]
    matrix: np.ndarray
    cover: ModuleMorphism
    relations: ModuleMorphism

    @property
    def p0_mults(self) -> dict[int, int]:
        return _count(self.p0_vertices)

    @property
    def p1_mults(self) -> dict[int, int]:
        return _count(self.p1_vertices)


def _count(vs: list[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for v in vs:
        out[v] = out.get(v, 0) + 1
    return out


def minimal_projective_presentation(M: PersistenceModule) -> ProjectivePresentation:
    P, p = M.poset, M.p
    gens0 = top_generators(M)
    P0, eps = free_cover(M, gens0)
    K, inc = kernel(eps)
    gens1 = top_generators(K)
    # push kernel generators into P0 coordinates
    v0 = [x for x, _ in gens0]
    v1 = [y for y, _ in gens1]
    pos0 = _free_positions(P, v0)
    lam = ff.zeros(len(v0), len(v1))
    for b, (y, w) in enumerate(gens1):
        vec = ff.matmul(inc.comps[y], w.reshape(-1, 1), p)[:, 0]
        for a, i in pos0[y].items():
            lam[a, b] = vec[i]
    for a, x in enumerate(v0):
        for b, y in enumerate(v1):
            if lam[a, b] and x == y:
                raise InternalInconsistency("presentation is not minimal")
    P1, rel_k = free_cover(K, gens1)
    rel = inc @ rel_k
    return ProjectivePresentation(M, v0, v1, lam, eps, rel)


def transpose(M: PersistenceModule) -> PersistenceModule:
    """``Tr M`` as a module over the opposite poset."""
    P, p = M.poset, M.p
    Q = P.opposite
    if M.is_zero():
        return zero_module(Q, p)
    pres = minimal_projective_presentation(M)
    v0, v1, lam = pres.p0_vertices, pres.p1_vertices, pres.matrix
    # projectives of Q: P^Q_z lives on the down-set of z in P
    A = free_module(Q, v0, p)
    B = free_module(Q, v1, p)
    posA = _free_positions(Q, v0)
    posB = _free_positions(Q, v1)
    comps = []
    for z in range(P.n):
        c = ff.zeros(B.dims[z], A.dims[z])
        for b, i in posB[z].items():
            for a, j in posA[z].items():
                c[i, j] = lam[a, b]
        comps.append(c)
    C, _ = cokernel(ModuleMorphism(A, B, tuple(comps)))
    return C


def dual(M: PersistenceModule) -> PersistenceModule:
    """``D M = Hom_k(M, k)`` over the opposite poset: transposed arrows on reversed edges."""
    Q = M.poset.opposite
    maps = {(y, x): a.T.copy() for (x, y), a in M.maps.items()}
    return PersistenceModule(Q, M.dims, maps, M.p, check=False)


def tau(M: PersistenceModule) -> PersistenceModule:
    """``D Tr M``, over the same poset as ``M``."""
    return dual(transpose(M))


def tau_inverse(M: PersistenceModule) -> PersistenceModule:
    """``Tr D M``, over the same poset as ``M``."""
    return transpose(dual(M))


# -- intgldim -----------------------------------------------------------------------


@dataclass
class IntgldimResult:
    """Per-interval translate dimensions and their maxima.

    ``tau_dims[k]`` is the resolution dimension of ``tau V_k``;
    ``tau_inverse_dims[k]`` the resolution dimension of ``tau^- V_k`` and
    ``tau_inverse_codims[k]`` its coresolution dimension. ``value`` is the
    maximum of ``tau_dims``, checked against the maximum of
    ``tau_inverse_codims``.
    """

    value: int
    tau_max: int
    tau_inverse_max: int
    tau_inverse_comax: int
    tau_dims: list[int]
    tau_inverse_dims: list[int]
    tau_inverse_codims: list[int]
    intervals: IntervalPoset

    @property
    def tau_inverse_agrees(self) -> bool:
        """Whether the resolution dimensions of ``tau^- V_I`` reach the same maximum."""
        return self.tau_inverse_max == self.tau_max


def _translate_dims_one(P: Poset, ip: IntervalPoset, k: int, p: int, max_depth, verify: bool = False):
    V = thin_module(P, ip.masks[k], p)
    T = tau(V)
    Ti = tau_inverse(V)
    return (
        interval_dimension(T, ip, max_depth, verify),
        interval_dimension(Ti, ip, max_depth, verify),
        interval_codimension(Ti, ip, max_depth, verify),
    )


_IP_CACHE: dict = {}


def _grid_intervals(shape) -> IntervalPoset:
    ip = _IP_CACHE.get(shape)
    if ip is None:
        ip = _IP_CACHE[shape] = enumerate_intervals(make_grid(*shape))
    return ip


def _translate_dims(args):
    shape, k, p, max_depth, verify = args
    ip = _grid_intervals(shape)
    return _translate_dims_one(ip.poset, ip, k, p, max_depth, verify)


def intgldim_detail(
    P: Poset,
    ip: IntervalPoset | None = None,
    p: int = 2,
    max_depth: int | None = None,
    jobs: int = 1,
    verify: bool = False,
) -> IntgldimResult:
    """``max_I intdim tau V_I`` together with the ``tau^-`` side, per interval.

    ``verify`` checks every resolution step (surjectivity, the approximation
    property for all intervals, exactness) and raises on the first failure.
    """
    if ip is None:
        ip = enumerate_intervals(P)
    if ip.poset != P:
        raise ValueError("interval poset belongs to another poset")
    n = len(ip)
    if jobs > 1 and P.kind == "grid" and not P.is_opposite:
        shape = tuple(P.shape)
        _IP_CACHE[shape] = ip
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            triples = list(pool.map(_translate_dims, [(shape, k, p, max_depth, verify) for k in range(n)], chunksize=4))
    else:
        triples = [_translate_dims_one(P, ip, k, p, max_depth, verify) for k in range(n)]
    td = [t[0] for t in triples]
    ti = [t[1] for t in triples]
    tc = [t[2] for t in triples]
    a, b, c = max(td, default=0), max(ti, default=0), max(tc, default=0)
    if a != c:
        raise InternalInconsistency(f"tau maximum {a} differs from the tau inverse coresolution maximum {c}")
    return IntgldimResult(a, a, b, c, td, ti, tc, ip)


def intgldim(P: Poset, ip: IntervalPoset | None = None, p: int = 2, max_depth: int | None = None, jobs: int = 1) -> int:
    """Interval resolution global dimension of ``kP``."""
    return intgldim_detail(P, ip, p, max_depth, jobs).value


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)
