"""Strictly increasing multi-indices and the signs of exterior products on them.

Both the complex and the real exterior algebra are built on top of this core.
A basis monomial ``e_{a_1} ^ ... ^ e_{a_k}`` is stored as the sorted tuple
``(a_1, ..., a_k)`` of 0-based generator indices.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def combos(m: int, k: int) -> tuple[MultiIndex, ...]:
    """All strictly increasing k-tuples from range(m), in lexicographic order."""
    if k < 0 or k > m:
        return ()
    return tuple(itertools.combinations(range(m), k))


@lru_cache(maxsize=None)
def positions(m: int, k: int) -> dict[MultiIndex, int]:
    return {idx: pos for pos, idx in enumerate(combos(m, k))}


def check(index, m: int) -> MultiIndex:
    """Validate a user supplied multi-index and return it as a tuple."""
    t = tuple(int(i) for i in index)
    if any(b <= a for a, b in zip(t, t[1:])):
        raise ValueError(f"multi-index {t} is not strictly increasing")
    if t and (t[0] < 0 or t[-1] >= m):
        raise ValueError(f"multi-index {t} out of range [0, {m})")
    return t


def insert(a: int, index: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Sign and result of ``e_a ^ e_index``; sign 0 when ``a`` already occurs."""
    if a in index:
        return 0, None
    smaller = sum(1 for i in index if i < a)
    return (-1) ** smaller, tuple(sorted(index + (a,)))


def remove(a: int, index: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Sign and result of the contraction of ``e_index`` with the dual vector of ``e_a``."""
    if a not in index:
        return 0, None
    s = index.index(a)
    return (-1) ** s, index[:s] + index[s + 1:]


def merge(left: MultiIndex, right: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Sign and result of ``e_left ^ e_right``."""
    if set(left) & set(right):
        return 0, None
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1) ** inversions, tuple(sorted(left + right))


@lru_cache(maxsize=None)
def creation(m: int, k: int, a: int) -> np.ndarray:
    """Matrix of ``e_a ^ .`` from degree k to degree k+1 (lexicographic bases)."""
    src, dst = combos(m, k), positions(m, k + 1)
    out = np.zeros((len(dst), len(src)))
    for col, idx in enumerate(src):
        sign, res = insert(a, idx)
        if sign:
            out[dst[res], col] = sign
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def annihilation(m: int, k: int, a: int) -> np.ndarray:
    """Matrix of the contraction with ``e_a^*`` from degree k to degree k-1."""
    src, dst = combos(m, k), positions(m, k - 1)
    out = np.zeros((len(dst), len(src)))
    for col, idx in enumerate(src):
        sign, res = remove(a, idx)
        if sign:
            out[dst[res], col] = sign
    out.setflags(write=False)
    return out


def minors(A: np.ndarray, k: int) -> np.ndarray:
    """Multiplicative compound: the matrix of k x k minors ``det A[I, J]``."""
    idx = combos(A.shape[0], k)
    out = np.empty((len(idx), len(idx)), dtype=np.result_type(A, float))
    if k == 0:
        return np.ones((1, 1), dtype=out.dtype)
    for r, I in enumerate(idx):
        for c, J in enumerate(idx):
            out[r, c] = np.linalg.det(A[np.ix_(I, J)])
    return out
