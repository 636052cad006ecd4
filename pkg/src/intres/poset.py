"""Finite posets given by Hasse diagrams, their intervals, and the poset of intervals.

Vertices are dense integers ``0..n-1``. Subsets of a poset are handled as
Python-int bitmasks throughout (bit ``x`` set iff vertex ``x`` belongs), which
keeps convexity, containment and closure tests cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


class Poset:
    """A finite poset presented by its Hasse diagram.

    Parameters
    ----------
    labels:
        One printable label per vertex; vertex ``i`` is ``labels[i]``.
    edges:
        Hasse edges ``(x, y)`` meaning ``y`` covers ``x``. Transitively implied
        edges are rejected; use :meth:`from_relations` to reduce first.
    kind, shape:
        ``kind`` is ``"grid"``, ``"chain"`` or ``"hasse"``; grids additionally
        carry ``shape = (m, n)`` and vertex ``(i, j)`` has id ``(j-1)*m + (i-1)``.
    """

    def __init__(
        self,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int]],
        *,
        kind: str = "hasse",
        shape: tuple[int, int] | None = None,
        opposite_of: "Poset | None" = None,
    ):
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("vertex labels must be distinct")
        self.n = len(self.labels)
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted({(int(a), int(b)) for a, b in edges}))
        self.kind = kind
        self.shape = shape
        self._opposite_of = opposite_of
        for a, b in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n) or a == b:
                raise ValueError(f"bad Hasse edge {(a, b)}")
        self._index = {lab: i for i, lab in enumerate(self.labels)}

        out_adj = [[] for _ in range(self.n)]
        in_adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            out_adj[a].append(b)
            in_adj[b].append(a)
        self.succ: tuple[tuple[int, ...], ...] = tuple(tuple(v) for v in out_adj)
        self.pred: tuple[tuple[int, ...], ...] = tuple(tuple(v) for v in in_adj)
        self.topo_order: tuple[int, ...] = self._toposort()

        up = [1 << x for x in range(self.n)]
        for x in reversed(self.topo_order):
            for y in self.succ[x]:
                up[x] |= up[y]
        down = [1 << x for x in range(self.n)]
        for x in self.topo_order:
            for y in self.pred[x]:
                down[x] |= down[y]
        self.up_mask: tuple[int, ...] = tuple(up)
        self.down_mask: tuple[int, ...] = tuple(down)
        self.nbr_mask: tuple[int, ...] = tuple(
            to_mask(self.succ[x]) | to_mask(self.pred[x]) for x in range(self.n)
        )
        for a, b in self.edges:
            # a -> b is a cover iff no other successor of a lies below b
            for c in self.succ[a]:
                if c != b and (self.up_mask[c] >> b) & 1:
                    raise ValueError(f"edge {(a, b)} is implied by transitivity")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_relations(cls, labels: Sequence, relations: Iterable[tuple], kind: str = "hasse") -> "Poset":
        """Build from arbitrary order relations given by label, reducing to the Hasse diagram."""
        labels = [str(x) for x in labels]
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        try:
            rel = {(index[str(a)], index[str(b)]) for a, b in relations}
        except KeyError as exc:
            raise ValueError(f"relation mentions unknown element {exc}") from None
        rel = {(a, b) for a, b in rel if a != b}
        reach = np.zeros((n, n), dtype=bool)
        for a, b in rel:
            reach[a, b] = True
        for k in range(n):
            reach |= reach[:, [k]] & reach[[k], :]
        if np.any(np.diag(reach)):
            raise ValueError("relations contain a cycle")
        hasse = []
        for a, b in zip(*np.nonzero(reach)):
            if not np.any(reach[a, :] & reach[:, b]):
                hasse.append((int(a), int(b)))
        return cls(labels, hasse, kind=kind)

    def _toposort(self) -> tuple[int, ...]:
        indeg = [len(p) for p in self.pred]
        order = []
        stack = [x for x in range(self.n) if indeg[x] == 0][::-1]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in reversed(self.succ[x]):
                indeg[y] -= 1
                if indeg[y] == 0:
                    stack.append(y)
        if len(order) != self.n:
            raise ValueError("Hasse diagram contains a cycle")
        return tuple(order)

    # -- basic queries -------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        if self.kind == "grid":
            return f"Poset(grid {self.shape[0]}x{self.shape[1]})"
        return f"Poset({self.kind}, {self.n} elements, {len(self.edges)} edges)"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.labels, self.edges))

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)) and str(label) not in self._index:
            if 0 <= int(label) < self.n:
                return int(label)
        try:
            return self._index[str(label)]
        except KeyError:
            raise ValueError(f"unknown vertex {label!r}") from None

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up_mask[x] >> y) & 1)

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for x in range(self.n):
            m[x, bits(self.up_mask[x])] = True
        m.setflags(write=False)
        return m

    @cached_property
    def comparable_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, y) for x in range(self.n) for y in bits(self.up_mask[x]))

    def segment(self, x: int, y: int) -> int:
        """Bitmask of ``[x, y]``."""
        return self.up_mask[x] & self.down_mask[y]

    def coords(self, x: int) -> tuple[int, int]:
        """Grid coordinates ``(i, j)`` of vertex ``x`` (1-based)."""
        if self.shape is None:
            raise ValueError("coordinates only exist on grids")
        m = self.shape[0]
        return (x % m + 1, x // m + 1)

    def vertex(self, i: int, j: int) -> int:
        m, n = self.shape
        if not (1 <= i <= m and 1 <= j <= n):
            raise ValueError(f"({i},{j}) is outside the {m}x{n} grid")
        return (j - 1) * m + (i - 1)

    @cached_property
    def opposite(self) -> "Poset":
        if self._opposite_of is not None:
            return self._opposite_of
        return Poset(
            self.labels,
            [(b, a) for a, b in self.edges],
            kind=self.kind,
            shape=self.shape,
            opposite_of=self,
        )

    @property
    def is_opposite(self) -> bool:
        return self._opposite_of is not None

    # -- subset predicates ---------------------------------------------------

    def up_closure(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.up_mask[x]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.down_mask[x]
        return out

    def is_convex(self, mask: int) -> bool:
        return (self.up_closure(mask) & self.down_closure(mask)) & ~mask == 0

    def is_connected(self, mask: int) -> bool:
        if mask == 0:
            return False
        return self.component_of(mask, (mask & -mask).bit_length() - 1) == mask

    def component_of(self, mask: int, x: int) -> int:
        seen = 1 << x
        frontier = seen
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= self.nbr_mask[v]
            nxt &= mask & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            c = self.component_of(mask, (rest & -rest).bit_length() - 1)
            out.append(c)
            rest &= ~c
        return out

    def is_interval(self, mask: int) -> bool:
        return mask != 0 and self.is_convex(mask) and self.is_connected(mask)

    def minimal_elements(self, mask: int) -> list[int]:
        return [x for x in bits(mask) if self.down_mask[x] & mask == 1 << x]

    def maximal_elements(self, mask: int) -> list[int]:
        return [x for x in bits(mask) if self.up_mask[x] & mask == 1 << x]


def make_grid(m: int, n: int) -> Poset:
    """The product order on ``{1..m} x {1..n}`` with unit steps as Hasse edges."""
    if m < 1 or n < 1:
        raise ValueError("grid sides must be positive")
    labels = [f"{i},{j}" for j in range(1, n + 1) for i in range(1, m + 1)]
    edges = []
    for j in range(1, n + 1):
        for i in range(1, m + 1):
            v = (j - 1) * m + (i - 1)
            if i < m:
                edges.append((v, v + 1))
            if j < n:
                edges.append((v, v + m))
    return Poset(labels, edges, kind="grid", shape=(m, n))


def make_chain(n: int) -> Poset:
    """The total order ``1 < 2 < ... < n``."""
    if n < 1:
        raise ValueError("chain length must be positive")
    return Poset([str(i) for i in range(1, n + 1)], [(i, i + 1) for i in range(n - 1)], kind="chain")


# -- intervals ----------------------------------------------------------------

Staircase = tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class Interval:
    """A connected convex subset; ``staircase`` lists ``(row, b, d)`` slices on grids."""

    members: tuple[int, ...]
    staircase: Staircase | None = field(default=None, compare=False)

    @cached_property
    def mask(self) -> int:
        return to_mask(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def issubset(self, other: "Interval") -> bool:
        return self.mask & ~other.mask == 0

    def describe(self, poset: Poset) -> str:
        if self.staircase is not None:
            return " ".join(f"[{b},{d}]_{i}" for i, b, d in self.staircase)
        return "{" + ",".join(poset.labels[x] for x in self.members) + "}"


def staircase_of(poset: Poset, mask: int) -> Staircase:
    """Row slices of a grid subset; raises if some row is not a contiguous run."""
    rows: dict[int, list[int]] = {}
    for x in bits(mask):
        i, j = poset.coords(x)
        rows.setdefault(j, []).append(i)
    out = []
    for j in sorted(rows):
        cols = sorted(rows[j])
        if cols[-1] - cols[0] + 1 != len(cols):
            raise ValueError("row slice is not contiguous")
        out.append((j, cols[0], cols[-1]))
    return tuple(out)


def staircase_members(poset: Poset, staircase: Iterable[Sequence[int]]) -> tuple[int, ...]:
    return tuple(sorted(poset.vertex(i, row) for row, b, d in staircase for i in range(b, d + 1)))


def valid_staircase(staircase: Staircase) -> bool:
    """Consecutive rows satisfy ``b_{i+1} <= b_i <= d_{i+1} <= d_i``."""
    if not staircase:
        return False
    for (r0, b0, d0), (r1, b1, d1) in zip(staircase, staircase[1:]):
        if r1 != r0 + 1 or not (b1 <= b0 <= d1 <= d0):
            return False
    return all(b <= d for _, b, d in staircase)


def make_interval(poset: Poset, members: Iterable[int]) -> Interval:
    """Validate ``members`` as an interval of ``poset`` and wrap it."""
    mem = tuple(sorted(set(int(x) for x in members)))
    mask = to_mask(mem)
    if not poset.is_interval(mask):
        raise ValueError(f"{[poset.labels[x] for x in mem]} is not an interval")
    stair = staircase_of(poset, mask) if poset.kind == "grid" else None
    return Interval(mem, stair)


def _grid_interval_masks(poset: Poset) -> Iterator[tuple[int, Staircase]]:
    m, n = poset.shape

    def grow(rows: list[tuple[int, int, int]]):
        yield tuple(rows)
        row, b, d = rows[-1]
        if row == n:
            return
        for b2 in range(1, b + 1):
            for d2 in range(b, d + 1):
                rows.append((row + 1, b2, d2))
                yield from grow(rows)
                rows.pop()

    for s in range(1, n + 1):
        for b in range(1, m + 1):
            for d in range(b, m + 1):
                for stair in grow([(s, b, d)]):
                    yield to_mask(staircase_members(poset, stair)), stair


def _generic_interval_masks(poset: Poset) -> Iterator[int]:
    # connected subsets grown one neighbour at a time, deduplicated by mask
    seen: set[int] = set()
    frontier = [1 << x for x in range(poset.n)]
    seen.update(frontier)
    while frontier:
        nxt = []
        for s in frontier:
            nb = 0
            for v in bits(s):
                nb |= poset.nbr_mask[v]
            for v in bits(nb & ~s):
                t = s | (1 << v)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    for s in seen:
        if poset.is_convex(s):
            yield s


@dataclass(frozen=True)
class IntervalGeometry:
    """Order data of one interval used when solving ``Hom(V_I, M)``.

    ``anchor[x]`` is the first minimal element below member ``x``; ``merges``
    lists members where several minimal elements meet (with those minima);
    ``exits`` are Hasse edges leaving the interval; ``up_extensions`` are the
    indices of the minimal intervals ``J`` strictly containing ``I`` as an
    up-set, minimal for the relation "is an up-set of".
    """

    mins: tuple[int, ...]
    maxs: tuple[int, ...]
    anchor: dict
    merges: tuple[tuple[int, tuple[int, ...]], ...]
    exits: tuple[tuple[int, int], ...]
    up_extensions: tuple[int, ...]


class IntervalPoset:
    """The set of all intervals of a poset, ordered by inclusion.

    Intervals are stored in lexicographic order of their sorted member
    tuples, which fixes every downstream table layout.
    """

    def __init__(self, poset: Poset, intervals: Sequence[Interval]):
        self.poset = poset
        self.intervals: tuple[Interval, ...] = tuple(sorted(intervals, key=lambda iv: iv.members))
        self._by_mask = {iv.mask: k for k, iv in enumerate(self.intervals)}
        self.masks: tuple[int, ...] = tuple(iv.mask for iv in self.intervals)
        self._covers: dict[int, tuple[Interval, ...]] = {}
        self._geometry: dict[int, IntervalGeometry] = {}

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __getitem__(self, k: int) -> Interval:
        return self.intervals[k]

    def index(self, iv: Interval | int) -> int:
        mask = iv if isinstance(iv, int) else iv.mask
        return self._by_mask[mask]

    def find(self, mask: int) -> Interval | None:
        k = self._by_mask.get(mask)
        return None if k is None else self.intervals[k]

    def leq(self, a: Interval, b: Interval) -> bool:
        return a.mask & ~b.mask == 0

    def strict_supersets(self, iv: Interval) -> list[Interval]:
        m = iv.mask
        return [self.intervals[k] for k, x in enumerate(self.masks) if x != m and x & m == m]

    def supersets(self, iv: Interval) -> list[Interval]:
        m = iv.mask
        return [self.intervals[k] for k, x in enumerate(self.masks) if x & m == m]

    def covers(self, iv: Interval) -> tuple[Interval, ...]:
        """Minimal intervals strictly containing ``iv``."""
        k = self.index(iv)
        if k not in self._covers:
            sup = self.strict_supersets(iv)
            masks = [s.mask for s in sup]
            out = []
            for s in sup:
                sm = s.mask
                if not any(t != sm and t & sm == t for t in masks):
                    out.append(s)
            self._covers[k] = tuple(out)
        return self._covers[k]

    @cached_property
    def _up_extensions(self) -> tuple[tuple[int, ...], ...]:
        P = self.poset
        masks = self.masks
        ups = [P.up_closure(m) for m in masks]
        out = []
        for k, m in enumerate(masks):
            up = ups[k]
            cands = [j for j, x in enumerate(masks) if x != m and x & m == m and x & up == m]
            mins = []
            for j in cands:
                xj = masks[j]
                if not any(i != j and masks[i] & xj == masks[i] and xj & ups[i] == masks[i] for i in cands):
                    mins.append(j)
            out.append(tuple(mins))
        return tuple(out)

    def geometry(self, k: int) -> IntervalGeometry:
        geo = self._geometry.get(k)
        if geo is None:
            geo = self._geometry[k] = self._make_geometry(k)
        return geo

    def _make_geometry(self, k: int) -> IntervalGeometry:
        P = self.poset
        mask = self.masks[k]
        mins = tuple(P.minimal_elements(mask))
        maxs = tuple(P.maximal_elements(mask))
        below = {x: tuple(m for m in mins if P.leq(m, x)) for x in bits(mask)}
        anchor = {x: below[x][0] for x in below}
        merges = []
        for x in bits(mask):
            if len(below[x]) < 2:
                continue
            # constraints at x already follow from a predecessor seeing the same minima
            if any((mask >> z) & 1 and below[z] == below[x] for z in P.pred[x]):
                continue
            merges.append((x, below[x]))
        exits = tuple((x, y) for x in bits(mask) for y in P.succ[x] if not (mask >> y) & 1)
        return IntervalGeometry(mins, maxs, anchor, tuple(merges), exits, self._up_extensions[k])

    def join(self, ivs: Iterable[Interval]) -> Interval | None:
        """Least interval containing every member of ``ivs``; ``None`` when there is none."""
        union = 0
        for iv in ivs:
            union |= iv.mask
        if union == 0:
            raise ValueError("join of an empty family is undefined")
        P = self.poset
        hull = P.up_closure(union) & P.down_closure(union)
        if P.is_connected(hull):
            # the convex hull lies inside every convex superset
            return self.find(hull)
        uppers = [m for m in self.masks if m & union == union]
        for u in uppers:
            if all(u & ~v == 0 for v in uppers):
                return self.find(u)
        return None


def enumerate_intervals(poset: Poset) -> IntervalPoset:
    """All nonempty connected convex subsets of ``poset``.

    Grids use the staircase parameterisation; other posets grow connected
    subsets and keep the convex ones.
    """
    if poset.kind == "grid" and not poset.is_opposite:
        ivs = [Interval(staircase_members(poset, stair), stair) for _, stair in _grid_interval_masks(poset)]
    else:
        ivs = [Interval(tuple(bits(m))) for m in _generic_interval_masks(poset)]
    return IntervalPoset(poset, ivs)


def subset_scan_intervals(poset: Poset, limit: int = 16) -> set[int]:
    """Masks of all intervals by checking every nonempty subset (exponential)."""
    if poset.n > limit:
        raise ValueError(f"subset scan refused for {poset.n} > {limit} elements")
    return {s for s in range(1, 1 << poset.n) if poset.is_interval(s)}


def all_subsets(items: Sequence) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
