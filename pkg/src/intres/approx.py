"""Right minimal interval approximations and minimal interval resolutions.

Minimal multiplicities come from the top of ``Hom(G, M)`` with
``G = (+)_I V_I``. For an interval ``I`` the radical part of ``Hom(V_I, M)``
is spanned by

* maps vanishing at some maximal element of ``I`` (they factor through the
  quotient of ``V_I`` by that element), and
* restrictions of ``Hom(V_J, M)`` along ``V_I -> V_J`` for the minimal ``J``
  containing ``I`` as an up-set.

Every nonzero map ``V_I -> V_J`` with ``J != I`` factors through one of the
two, so the quotient is the top at ``I``. :func:`intres.testkit.oracle_top`
recomputes it from all pairwise Hom spaces as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fflinalg as ff
from .errors import DepthExceeded, InvariantViolation
from .module import ModuleMorphism, PersistenceModule, submodule_from_bases
from .poset import Interval, IntervalPoset, bits


# -- Hom(V_I, M) in coordinates at the minimal elements of I --------------------


@dataclass
class IntervalHom:
    """``Hom(V_I, M)`` as the columns of ``basis``.

    A morphism is recorded by its values at ``mins`` stacked in order
    (``offsets`` delimits the blocks); every other value is obtained by
    pushing forward from the anchor minimum.
    """

    index: int
    mins: tuple[int, ...]
    offsets: tuple[int, ...]
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _block(offsets, mins, m):
    k = mins.index(m)
    return slice(offsets[k], offsets[k + 1])


def evaluate(M: PersistenceModule, geo, offsets, vecs: np.ndarray, x: int) -> np.ndarray:
    """Values at member ``x`` of morphisms given in minimal-element coordinates."""
    m = geo.anchor[x]
    sub = vecs[_block(offsets, geo.mins, m), :]
    if m == x:
        return sub
    return ff.matmul(M.path_map(m, x), sub, M.p)


def interval_hom(M: PersistenceModule, ip: IntervalPoset, k: int) -> IntervalHom:
    """Solve for ``Hom(V_I, M)`` where ``I = ip[k]``."""
    p = M.p
    geo = ip.geometry(k)
    mins = geo.mins
    offsets = [0]
    for m in mins:
        offsets.append(offsets[-1] + M.dims[m])
    offsets = tuple(offsets)
    width = offsets[-1]
    if width == 0:
        return IntervalHom(k, mins, offsets, ff.zeros(0, 0))
    rows = []
    for x, below in geo.merges:
        if M.dims[x] == 0:
            continue
        a0 = below[0]
        first = M.path_map(a0, x)
        for a in below[1:]:
            r = ff.zeros(M.dims[x], width)
            r[:, _block(offsets, mins, a0)] = first
            r[:, _block(offsets, mins, a)] = (-M.path_map(a, x)) % p
            rows.append(r)
    for x, y in geo.exits:
        if M.dims[y] == 0:
            continue
        a0 = geo.anchor[x]
        if M.dims[a0] == 0:
            continue
        r = ff.zeros(M.dims[y], width)
        r[:, _block(offsets, mins, a0)] = M.path_map(a0, y)
        rows.append(r)
    if rows:
        basis = ff.kernel_basis(np.vstack(rows) % p, p)
    else:
        basis = ff.identity(width)
    return IntervalHom(k, mins, offsets, basis)


def all_interval_homs(M: PersistenceModule, ip: IntervalPoset) -> dict[int, IntervalHom]:
    """Nonzero ``Hom(V_I, M)`` for every interval, keyed by interval index."""
    out = {}
    dims = M.dims
    for k in range(len(ip)):
        geo = ip.geometry(k)
        if not any(dims[m] for m in geo.mins):
            continue
        h = interval_hom(M, ip, k)
        if h.dim:
            out[k] = h
    return out


def radical_vectors(M: PersistenceModule, ip: IntervalPoset, homs: dict[int, IntervalHom], k: int) -> np.ndarray:
    """Spanning vectors (minimal-element coordinates) of the radical part of ``Hom(V_I, M)``."""
    p = M.p
    h = homs[k]
    geo = ip.geometry(k)
    cols = []
    for t in geo.maxs:
        ev = evaluate(M, geo, h.offsets, h.basis, t)
        if ev.shape[0] == 0:
            cols.append(h.basis)
            continue
        ker = ff.kernel_basis(ev, p)
        if ker.shape[1]:
            cols.append(ff.matmul(h.basis, ker, p))
    for j in geo.up_extensions:
        hj = homs.get(j)
        if hj is None:
            continue
        gj = ip.geometry(j)
        blocks = []
        for m in geo.mins:
            blocks.append(evaluate(M, gj, hj.offsets, hj.basis, m))
        cols.append(np.vstack(blocks))
    return ff.hstack(cols, rows=h.basis.shape[0])


def top_generators(M: PersistenceModule, ip: IntervalPoset, homs: dict[int, IntervalHom]) -> dict[int, np.ndarray]:
    """For each interval with nonzero top, coset representatives of the top (as columns)."""
    out = {}
    for k, h in homs.items():
        rad = radical_vectors(M, ip, homs, k)
        keep = ff.complement_columns(rad, h.basis, M.p)
        if keep:
            out[k] = h.basis[:, keep]
    return out


# -- approximation steps -----------------------------------------------------------


@dataclass
class ApproximationStep:
    """One right minimal interval approximation ``cover: X -> target``.

    ``summands[s] = (interval index, generator)`` with the generator written
    in minimal-element coordinates; ``X`` is their direct sum in that order.
    """

    target: PersistenceModule
    multiplicities: dict[Interval, int]
    summands: list[tuple[int, np.ndarray]]
    cover: ModuleMorphism
    kernel: PersistenceModule
    inclusion: ModuleMorphism
    homs: dict[int, IntervalHom] = field(repr=False, default_factory=dict)

    @property
    def source(self) -> PersistenceModule:
        return self.cover.source


def _summand_module(M: PersistenceModule, ip: IntervalPoset, summands) -> tuple[PersistenceModule, list[list[int]]]:
    P = M.poset
    members = [[] for _ in range(P.n)]
    for s, (k, _) in enumerate(summands):
        for x in ip[k].members:
            members[x].append(s)
    pos = [{s: i for i, s in enumerate(members[x])} for x in range(P.n)]
    maps = {}
    for x, y in P.edges:
        a = ff.zeros(len(members[y]), len(members[x]))
        for s in members[x]:
            i = pos[y].get(s)
            if i is not None:
                a[i, pos[x][s]] = 1
        maps[(x, y)] = a
    X = PersistenceModule(P, [len(v) for v in members], maps, M.p, check=False)
    return X, members


def minimal_right_interval_approximation(M: PersistenceModule, ip: IntervalPoset) -> ApproximationStep:
    """Right minimal approximation of ``M`` by interval-decomposables, with its kernel."""
    if M.poset != ip.poset:
        raise ValueError("module and interval poset live over different posets")
    p = M.p
    homs = all_interval_homs(M, ip)
    tops = top_generators(M, ip, homs)
    summands = []
    mults = {}
    for k in sorted(tops):
        g = tops[k]
        mults[ip[k]] = g.shape[1]
        for c in range(g.shape[1]):
            summands.append((k, g[:, [c]]))
    X, members = _summand_module(M, ip, summands)
    comps = []
    for x in range(M.n):
        cols = []
        for s in members[x]:
            k, g = summands[s]
            geo = ip.geometry(k)
            cols.append(evaluate(M, geo, homs[k].offsets, g, x))
        comps.append(ff.hstack(cols, rows=M.dims[x]) if cols else ff.zeros(M.dims[x], 0))
    cover = ModuleMorphism(X, M, tuple(comps))
    bases = [ff.kernel_basis(c, p) if c.shape[1] else ff.zeros(0, 0) for c in comps]
    K, inc = submodule_from_bases(X, bases)
    return ApproximationStep(M, mults, summands, cover, K, inc, homs)


# -- verification ------------------------------------------------------------------


def interval_hom_components(ip: IntervalPoset, k: int, j: int) -> list[int]:
    """Supports of a basis of ``Hom(V_K, V_J)``: components of ``K & J`` that are
    down-closed in ``K`` and up-closed in ``J``."""
    P = ip.poset
    K, J = ip.masks[k], ip.masks[j]
    out = []
    for c in P.components(K & J):
        if P.down_closure(c) & K == c and P.up_closure(c) & J == c:
            out.append(c)
    return out


def check_step(step: ApproximationStep, ip: IntervalPoset) -> dict[str, bool]:
    """Surjectivity, the approximation property for every interval, and exactness."""
    M = step.target
    p = M.p
    surj = step.cover.is_epi()
    # every map V_K -> M lifts: images of Hom(V_K, X) fill Hom(V_K, M)
    approx_ok = True
    for k, h in step.homs.items():
        geo = ip.geometry(k)
        cols = []
        for kk, g in step.summands:
            for c in interval_hom_components(ip, k, kk):
                gk = ip.geometry(kk)
                blocks = []
                for m in geo.mins:
                    if (c >> m) & 1:
                        blocks.append(evaluate(M, gk, step.homs[kk].offsets, g, m))
                    else:
                        blocks.append(ff.zeros(M.dims[m], 1))
                cols.append(np.vstack(blocks))
        if ff.rank(ff.hstack(cols, rows=h.basis.shape[0]), p) != h.dim:
            approx_ok = False
            break
    exact = all(
        step.kernel.dims[x] == step.source.dims[x] - ff.rank(step.cover.comps[x], p) for x in range(M.n)
    ) and step.inclusion.is_natural()
    return {"surjective": surj, "approximation": approx_ok, "exact": exact}


# -- resolutions ---------------------------------------------------------------------


@dataclass
class IntervalResolution:
    """Minimal interval resolution ``0 -> X_r -> ... -> X_0 -> M -> 0``."""

    module: PersistenceModule
    intervals: IntervalPoset
    steps: list[ApproximationStep]
    checks: dict[str, bool]

    @property
    def length(self) -> int:
        return max(len(self.steps) - 1, 0)

    @property
    def table(self) -> dict[Interval, list[int]]:
        """``d_J^(i)`` for every interval appearing in some term, padded to ``length + 1``."""
        r = self.length
        out: dict[Interval, list[int]] = {}
        for i, step in enumerate(self.steps):
            for iv, d in step.multiplicities.items():
                out.setdefault(iv, [0] * (r + 1))[i] = d
        return dict(sorted(out.items(), key=lambda kv: kv[0].members))

    def euler_profile(self) -> dict[Interval, int]:
        return euler_profile(self)


def default_max_depth(ip: IntervalPoset) -> int:
    return ip.poset.n * len(ip)


def interval_resolution(
    M: PersistenceModule,
    ip: IntervalPoset,
    max_depth: int | None = None,
    verify: bool = True,
) -> IntervalResolution:
    """Iterate minimal approximations on successive kernels until the kernel vanishes.

    Raises :class:`DepthExceeded` when more than ``max_depth`` kernels would be
    needed, and :class:`InvariantViolation` when ``verify`` finds a broken step.
    """
    if max_depth is None:
        max_depth = default_max_depth(ip)
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    steps: list[ApproximationStep] = []
    checks = {"surjective": True, "approximation": True, "exact": True}
    target = M
    while True:
        step = minimal_right_interval_approximation(target, ip)
        steps.append(step)
        if verify:
            for name, ok in check_step(step, ip).items():
                checks[name] = checks[name] and ok
            if not all(checks.values()):
                bad = [k for k, v in checks.items() if not v]
                raise InvariantViolation(f"resolution step {len(steps) - 1} fails {bad}")
        if step.kernel.is_zero():
            break
        if len(steps) > max_depth:
            raise DepthExceeded(f"kernel still nonzero after {max_depth} steps")
        target = step.kernel
    if verify:
        # minimality of length: every non-final kernel is nonzero by construction
        checks["minimal_length"] = all(not s.kernel.is_zero() for s in steps[:-1])
    return IntervalResolution(M, ip, steps, checks)


def interval_dimension(M: PersistenceModule, ip: IntervalPoset, max_depth: int | None = None, verify: bool = False) -> int:
    """Length of the minimal interval resolution (``0`` for the zero module)."""
    if M.is_zero():
        return 0
    return interval_resolution(M, ip, max_depth, verify).length


def opposite_intervals(ip: IntervalPoset) -> IntervalPoset:
    """The same member sets read as intervals of the opposite poset (convexity and
    connectedness are self-dual)."""
    op = getattr(ip, "_opposite", None)
    if op is None:
        op = IntervalPoset(ip.poset.opposite, list(ip))
        ip._opposite = op
        op._opposite = ip
    return op


def interval_codimension(M: PersistenceModule, ip: IntervalPoset, max_depth: int | None = None, verify: bool = False) -> int:
    """Length of the minimal interval coresolution ``0 -> M -> Y_0 -> ... -> Y_r -> 0``.

    Vector-space duality turns it into a resolution of ``D M`` over the
    opposite poset.
    """
    if M.is_zero():
        return 0
    DM = PersistenceModule(M.poset.opposite, M.dims, {(y, x): a.T.copy() for (x, y), a in M.maps.items()}, M.p, check=False)
    return interval_dimension(DM, opposite_intervals(ip), max_depth, verify)


def euler_profile(R: IntervalResolution) -> dict[Interval, int]:
    """``J -> sum_i (-1)^i d_J^(i)``."""
    out = {}
    for iv, ds in R.table.items():
        out[iv] = sum(d if i % 2 == 0 else -d for i, d in enumerate(ds))
    return out


def multiplicity_vector(profile: dict[Interval, int], ip: IntervalPoset) -> np.ndarray:
    """A profile as a dense integer vector indexed like ``ip``."""
    v = np.zeros(len(ip), dtype=np.int64)
    for iv, d in profile.items():
        v[ip.index(iv)] = d
    return v
