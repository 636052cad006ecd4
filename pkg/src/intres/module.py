"""Persistence modules over a finite poset as commutative quiver representations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import fflinalg as ff
from .poset import Interval, Poset, bits, make_interval


class CommutativityError(ValueError):
    """Raised when arrow matrices do not define a functor on the poset."""


class PersistenceModule:
    """A functor ``P -> vect_k`` over ``k = F_p``.

    ``maps[(x, y)]`` is the ``dims[y] x dims[x]`` matrix on the Hasse edge
    ``x -> y``. Commutativity is checked at construction unless ``check=False``
    (internal constructors that produce functors by design pass ``False``).
    """

    def __init__(
        self,
        poset: Poset,
        dims: Sequence[int],
        maps: Mapping[tuple[int, int], np.ndarray] | None = None,
        p: int = 2,
        *,
        check: bool = True,
    ):
        self.poset = poset
        self.p = p if not check else ff.check_modulus(p)
        dims = tuple(int(d) for d in dims)
        if len(dims) != poset.n or any(d < 0 for d in dims):
            raise ValueError("dims must give one nonnegative integer per vertex")
        self.dims = dims
        maps = dict(maps or {})
        self.maps: dict[tuple[int, int], np.ndarray] = {}
        for e in poset.edges:
            x, y = e
            shape = (dims[y], dims[x])
            a = maps.pop(e, None)
            if a is None:
                a = ff.zeros(*shape)
            else:
                a = np.asarray(a, dtype=np.int64)
                if a.size == 0:
                    a = a.reshape(shape)
                if a.shape != shape:
                    raise ValueError(f"map on {poset.labels[x]}->{poset.labels[y]} has shape {a.shape}, expected {shape}")
                a = a % self.p
            self.maps[e] = a
        if maps:
            raise ValueError(f"maps given on non-edges {sorted(maps)}")
        if check and not self.check_commutativity():
            raise CommutativityError("arrow matrices do not commute")

    def __repr__(self) -> str:
        return f"PersistenceModule({self.poset!r}, dims={self.dims}, p={self.p})"

    @property
    def n(self) -> int:
        return self.poset.n

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    @cached_property
    def support(self) -> int:
        return sum(1 << x for x, d in enumerate(self.dims) if d)

    @cached_property
    def _paths(self) -> dict[tuple[int, int], np.ndarray]:
        # M(x -> y) for x <= y, composed along the first predecessor of y
        P, p = self.poset, self.p
        out: dict[tuple[int, int], np.ndarray] = {}
        for x in range(P.n):
            out[(x, x)] = ff.identity(self.dims[x])
        for y in P.topo_order:
            for x in bits(P.down_mask[y] & ~(1 << y)):
                for z in P.pred[y]:
                    if P.leq(x, z):
                        out[(x, y)] = ff.matmul(self.maps[(z, y)], out[(x, z)], p)
                        break
        return out

    def path_map(self, x: int, y: int) -> np.ndarray:
        """The structure map ``M(x -> y)`` for ``x <= y``."""
        try:
            return self._paths[(x, y)]
        except KeyError:
            raise ValueError(f"{self.poset.labels[x]} is not below {self.poset.labels[y]}") from None

    def check_commutativity(self) -> bool:
        P, p = self.poset, self.p
        for y in range(P.n):
            preds = P.pred[y]
            if len(preds) < 2:
                continue
            for x in bits(P.down_mask[y] & ~(1 << y)):
                via = [z for z in preds if P.leq(x, z)]
                if len(via) < 2:
                    continue
                first = ff.matmul(self.maps[(via[0], y)], self.path_map(x, via[0]), p)
                for z in via[1:]:
                    if not np.array_equal(first, ff.matmul(self.maps[(z, y)], self.path_map(x, z), p)):
                        return False
        return True

    def same_as(self, other: "PersistenceModule") -> bool:
        """Literal equality of dims and matrices (not isomorphism)."""
        return (
            self.poset == other.poset
            and self.p == other.p
            and self.dims == other.dims
            and all(np.array_equal(self.maps[e], other.maps[e]) for e in self.poset.edges)
        )


@dataclass(frozen=True)
class ModuleMorphism:
    """A natural transformation; ``comps[x]`` is ``target.dims[x] x source.dims[x]``."""

    source: PersistenceModule
    target: PersistenceModule
    comps: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.source.poset != self.target.poset:
            raise ValueError("morphism between modules over different posets")
        for x, c in enumerate(self.comps):
            if c.shape != (self.target.dims[x], self.source.dims[x]):
                raise ValueError(f"component at {x} has shape {c.shape}")

    @property
    def p(self) -> int:
        return self.source.p

    def is_natural(self) -> bool:
        p = self.p
        for (x, y), a in self.source.maps.items():
            lhs = ff.matmul(self.comps[y], a, p)
            rhs = ff.matmul(self.target.maps[(x, y)], self.comps[x], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return all(not c.any() for c in self.comps)

    def ranks(self) -> tuple[int, ...]:
        return tuple(ff.rank(c, self.p) for c in self.comps)

    def is_epi(self) -> bool:
        return all(r == d for r, d in zip(self.ranks(), self.target.dims))

    def is_mono(self) -> bool:
        return all(r == d for r, d in zip(self.ranks(), self.source.dims))

    def vector(self) -> np.ndarray:
        return np.concatenate([c.reshape(-1) for c in self.comps]) if self.comps else np.zeros(0, dtype=np.int64)

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        # self after other
        p = self.p
        return ModuleMorphism(other.source, self.target, tuple(ff.matmul(a, b, p) for a, b in zip(self.comps, other.comps)))

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        p = self.p
        return ModuleMorphism(self.source, self.target, tuple((a + b) % p for a, b in zip(self.comps, other.comps)))

    def scaled(self, c: int) -> "ModuleMorphism":
        p = self.p
        return ModuleMorphism(self.source, self.target, tuple((a * c) % p for a in self.comps))


def identity_morphism(M: PersistenceModule) -> ModuleMorphism:
    return ModuleMorphism(M, M, tuple(ff.identity(d) for d in M.dims))


def zero_morphism(M: PersistenceModule, N: PersistenceModule) -> ModuleMorphism:
    return ModuleMorphism(M, N, tuple(ff.zeros(N.dims[x], M.dims[x]) for x in range(M.n)))


@dataclass(frozen=True)
class HomBasis:
    source: PersistenceModule
    target: PersistenceModule
    basis: tuple[ModuleMorphism, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)


# -- constructors -------------------------------------------------------------


def zero_module(P: Poset, p: int = 2) -> PersistenceModule:
    return PersistenceModule(P, [0] * P.n, p=p, check=False)


def thin_module(P: Poset, mask: int, p: int = 2) -> PersistenceModule:
    """``k`` on ``mask`` with identity maps inside; assumes ``mask`` is convex."""
    dims = [(mask >> x) & 1 for x in range(P.n)]
    maps = {}
    for x, y in P.edges:
        if dims[x] and dims[y]:
            maps[(x, y)] = ff.identity(1)
    return PersistenceModule(P, dims, maps, p, check=False)


def interval_module(P: Poset, I: Interval | Iterable[int], p: int = 2) -> PersistenceModule:
    """The interval module ``V_I``; member sets that are not intervals are rejected."""
    if not isinstance(I, Interval):
        I = make_interval(P, I)
    elif not P.is_interval(I.mask):
        raise ValueError("not an interval of this poset")
    return thin_module(P, I.mask, p)


def projective_at(P: Poset, x: int, p: int = 2) -> PersistenceModule:
    """Indecomposable projective at ``x``: the interval module on ``{y >= x}``."""
    return interval_module(P, bits(P.up_mask[x]), p)


def injective_at(P: Poset, x: int, p: int = 2) -> PersistenceModule:
    """Indecomposable injective at ``x``: the interval module on ``{y <= x}``."""
    return interval_module(P, bits(P.down_mask[x]), p)


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = ff.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def direct_sum(modules: Sequence[PersistenceModule], poset: Poset | None = None, p: int | None = None) -> PersistenceModule:
    """Blockwise direct sum; ``direct_sum([], poset)`` is the zero module."""
    if not modules:
        if poset is None:
            raise ValueError("direct sum of nothing needs the poset")
        return zero_module(poset, 2 if p is None else p)
    P = modules[0].poset
    q = modules[0].p
    if any(M.poset != P or M.p != q for M in modules):
        raise ValueError("summands live over different posets or fields")
    dims = [sum(M.dims[x] for M in modules) for x in range(P.n)]
    maps = {e: _block_diag([M.maps[e] for M in modules]) for e in P.edges}
    return PersistenceModule(P, dims, maps, q, check=False)


def transport(M: PersistenceModule, g: Sequence[np.ndarray]) -> PersistenceModule:
    """The module isomorphic to ``M`` via the invertible vertex matrices ``g``."""
    p = M.p
    ginv = [ff.invert(a, p) for a in g]
    if any(a is None for a in ginv):
        raise ValueError("transport needs invertible matrices")
    maps = {(x, y): ff.matmul(ff.matmul(g[y], a, p), ginv[x], p) for (x, y), a in M.maps.items()}
    return PersistenceModule(M.poset, M.dims, maps, p, check=False)


def scramble(M: PersistenceModule, seed: int | np.random.Generator) -> PersistenceModule:
    """Conjugate every vector space by a random invertible matrix (an isomorphic copy)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = [ff.random_invertible(rng, d, M.p) for d in M.dims]
    return transport(M, g)


# -- Hom spaces ---------------------------------------------------------------


def _vec_offsets(M: PersistenceModule, N: PersistenceModule) -> list[int]:
    offs = [0]
    for x in range(M.n):
        offs.append(offs[-1] + N.dims[x] * M.dims[x])
    return offs


def hom_system(M: PersistenceModule, N: PersistenceModule) -> np.ndarray:
    """The intertwining system whose null space is ``Hom(M, N)``.

    Unknowns are the row-major entries of every component ``phi_x``; each
    Hasse edge ``x -> y`` contributes ``phi_y M(e) - N(e) phi_x = 0``.
    """
    if M.poset != N.poset or M.p != N.p:
        raise ValueError("Hom between modules over different posets or fields")
    p = M.p
    offs = _vec_offsets(M, N)
    rows = []
    for (x, y), a in M.maps.items():
        b = N.maps[(x, y)]
        nrow = N.dims[y] * M.dims[x]
        if nrow == 0:
            continue
        block = ff.zeros(nrow, offs[-1])
        # vec_r(phi_y @ a) = kron(I, a^T) vec_r(phi_y); vec_r(b @ phi_x) = kron(b, I) vec_r(phi_x)
        block[:, offs[y] : offs[y + 1]] += np.kron(ff.identity(N.dims[y]), a.T)
        block[:, offs[x] : offs[x + 1]] -= np.kron(b, ff.identity(M.dims[x]))
        rows.append(block % p)
    return ff.vstack(rows, cols=offs[-1])


def hom_basis(M: PersistenceModule, N: PersistenceModule) -> HomBasis:
    """A basis of all natural transformations ``M => N``."""
    p = M.p
    system = hom_system(M, N)
    ker = ff.kernel_basis(system, p)
    offs = _vec_offsets(M, N)
    basis = []
    for k in range(ker.shape[1]):
        v = ker[:, k]
        comps = tuple(v[offs[x] : offs[x + 1]].reshape(N.dims[x], M.dims[x]).copy() for x in range(M.n))
        basis.append(ModuleMorphism(M, N, comps))
    return HomBasis(M, N, tuple(basis))


def hom_dim(M: PersistenceModule, N: PersistenceModule) -> int:
    system = hom_system(M, N)
    return system.shape[1] - ff.rank(system, M.p)


# -- kernels and cokernels ----------------------------------------------------


def submodule_from_bases(M: PersistenceModule, bases: Sequence[np.ndarray]) -> tuple[PersistenceModule, ModuleMorphism]:
    """The submodule spanned vertexwise by full-column-rank ``bases`` (assumed closed)."""
    p = M.p
    dims = [b.shape[1] for b in bases]
    maps = {}
    for (x, y), a in M.maps.items():
        if dims[x] == 0 or dims[y] == 0:
            continue
        maps[(x, y)] = ff.coordinates(bases[y], ff.matmul(a, bases[x], p), p)
    S = PersistenceModule(M.poset, dims, maps, p, check=False)
    return S, ModuleMorphism(S, M, tuple(np.array(b, dtype=np.int64) for b in bases))


def kernel(f: ModuleMorphism) -> tuple[PersistenceModule, ModuleMorphism]:
    """Vertexwise kernel with induced arrows, plus its inclusion into ``f.source``."""
    p = f.p
    bases = [ff.kernel_basis(c, p) if c.shape[1] else ff.zeros(0, 0) for c in f.comps]
    return submodule_from_bases(f.source, bases)


def cokernel(f: ModuleMorphism) -> tuple[PersistenceModule, ModuleMorphism]:
    """Vertexwise cokernel with induced arrows, plus the projection from ``f.target``."""
    p = f.p
    N = f.target
    proj = []
    sect = []
    for x, c in enumerate(f.comps):
        d = N.dims[x]
        img = ff.image_basis(c, p) if d else ff.zeros(0, 0)
        keep = ff.complement_columns(img, ff.identity(d), p) if d else []
        s = ff.identity(d)[:, keep] if d else ff.zeros(0, 0)
        full = np.hstack([img, s]) if d else ff.zeros(0, 0)
        inv = ff.invert(full, p) if d else ff.zeros(0, 0)
        proj.append(inv[img.shape[1] :, :].copy() if d else ff.zeros(0, 0))
        sect.append(s)
    dims = [s.shape[1] for s in sect]
    maps = {}
    for (x, y), a in N.maps.items():
        if dims[x] and dims[y]:
            maps[(x, y)] = ff.matmul(proj[y], ff.matmul(a, sect[x], p), p)
    C = PersistenceModule(N.poset, dims, maps, p, check=False)
    proj = [q if q.shape == (dims[x], N.dims[x]) else ff.zeros(dims[x], N.dims[x]) for x, q in enumerate(proj)]
    return C, ModuleMorphism(N, C, tuple(proj))


def submodule_generated(M: PersistenceModule, gens: Iterable[tuple[int, np.ndarray]]) -> tuple[PersistenceModule, ModuleMorphism]:
    """Smallest submodule containing the vectors ``v`` at vertices ``x`` of ``gens``."""
    P, p = M.poset, M.p
    span = [ff.zeros(M.dims[x], 0) for x in range(P.n)]
    for x, v in gens:
        v = np.asarray(v, dtype=np.int64).reshape(-1, 1) % p
        for y in bits(P.up_mask[x]):
            span[y] = np.hstack([span[y], ff.matmul(M.path_map(x, y), v, p)])
    bases = [ff.image_basis(s, p) if s.shape[1] else s for s in span]
    return submodule_from_bases(M, bases)
