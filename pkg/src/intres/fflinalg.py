"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays whose entries are residues in
``[0, p)``; the modulus travels alongside as an explicit ``p`` argument.
``p < 2**16`` keeps every intermediate product inside int64.

The reduced row echelon form is the only hot loop; it exists twice, as a
numba kernel and as a vectorised numpy routine (see :mod:`intres._accel`).
Both produce the same (unique) RREF.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._accel import HAVE_NUMBA, njit

MAX_MODULUS = 1 << 16

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in _SMALL_PRIMES:
        if p % q == 0:
            return p == q
    f = 17
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    p = int(p)
    if not (is_prime(p) and p < MAX_MODULUS):
        raise ValueError(f"field modulus must be a prime below 2**16, got {p}")
    return p


def as_fp(a, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``a`` to a 2-D int64 array of residues mod ``p``."""
    arr = np.asarray(a, dtype=np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    return np.mod(arr, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a @ b) % p


def hstack(ms: Sequence[np.ndarray], rows: int | None = None) -> np.ndarray:
    """Horizontal concatenation that tolerates an empty list and 0-width blocks."""
    if not ms:
        return zeros(0 if rows is None else rows, 0)
    return np.hstack([np.asarray(m, dtype=np.int64) for m in ms])


def vstack(ms: Sequence[np.ndarray], cols: int | None = None) -> np.ndarray:
    if not ms:
        return zeros(0, 0 if cols is None else cols)
    return np.vstack([np.asarray(m, dtype=np.int64) for m in ms])


def block(rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Assemble a block matrix; every block in a row shares its height."""
    return vstack([hstack(r) for r in rows])


# -- RREF kernels -----------------------------------------------------------


@njit(cache=True)
def _inv_mod(a, p):
    # extended Euclid; a is a nonzero residue
    t, new_t = 0, 1
    r, new_r = p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _rref_loops(a, p):
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i != r:
                f = a[i, c]
                if f != 0:
                    for j in range(c, n):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return a, pivots[:r]


def _rref_numpy(a: np.ndarray, p: int):
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.asarray(pivots, dtype=np.int64)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Reduced row echelon form of ``a`` over F_p.

    Returns ``(R, pivot_columns, rank)``; ``a`` is not modified.
    """
    work = np.array(a, dtype=np.int64, copy=True) % p
    if work.size == 0:
        return work, (), 0
    if HAVE_NUMBA:
        red, piv = _rref_loops(work, np.int64(p))
    else:
        red, piv = _rref_numpy(work, p)
    pivots = tuple(int(c) for c in piv)
    return red, pivots, len(pivots)


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return rref(a, p)[2]


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right null space ``{x : a @ x = 0}``."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return identity(n)
    red, pivots, r = rref(a, p)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = zeros(n, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(pivots):
            basis[c, k] = (-red[i, f]) % p
    return basis


def nullity(a: np.ndarray, p: int) -> int:
    return a.shape[1] - rank(a, p)


def image_basis(a: np.ndarray, p: int) -> np.ndarray:
    """The pivot columns of ``a``: a basis of its column space drawn from ``a`` itself."""
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, pivots, _ = rref(a, p)
    return np.array(a[:, list(pivots)], dtype=np.int64) % p


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``x`` with ``a @ x = b`` (``b`` may have several columns), or ``None``."""
    b2 = b.reshape(-1, 1) if b.ndim == 1 else b
    m, n = a.shape
    k = b2.shape[1]
    if k == 0:
        return zeros(n, 0)
    if m == 0:
        return zeros(n, k)
    red, pivots, r = rref(np.hstack([a % p, b2 % p]), p)
    if any(c >= n for c in pivots):
        return None
    x = zeros(n, k)
    for i, c in enumerate(pivots):
        x[c] = red[i, n:]
    return x.reshape(-1) if b.ndim == 1 else x


def invert(a: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse of a square matrix, or ``None`` when it is singular."""
    n, n2 = a.shape
    if n != n2:
        raise ValueError("only square matrices can be inverted")
    if n == 0:
        return zeros(0, 0)
    red, pivots, r = rref(np.hstack([a % p, identity(n)]), p)
    if r < n or pivots[n - 1] != n - 1:
        return None
    return red[:, n:].copy()


def complement_columns(span: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Indices of ``candidates`` columns extending a basis of ``span`` greedily.

    Scans candidates left to right and keeps those not already in the span of
    ``span`` plus the previously kept ones.
    """
    s = span.shape[1]
    if candidates.shape[1] == 0:
        return []
    _, pivots, _ = rref(np.hstack([span, candidates]) % p, p)
    return [c - s for c in pivots if c >= s]


def coordinates(basis: np.ndarray, vectors: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of ``vectors`` in a full-column-rank ``basis``; raises if not in span."""
    x = solve(basis, vectors, p)
    if x is None:
        raise ValueError("vectors do not lie in the span of the basis")
    return x


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    while True:
        m = random_matrix(rng, n, n, p)
        if rank(m, p) == n:
            return m
