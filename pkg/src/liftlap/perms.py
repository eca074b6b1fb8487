"""Permutations of {0, ..., k-1} stored as image tuples.

A permutation ``p`` maps ``j`` to ``p[j]``.  File formats use 1-based
image lists; everything in memory is 0-based.
"""

from __future__ import annotations

import numpy as np

from .errors import VoltageError

Perm = tuple


def identity(k: int) -> Perm:
    return tuple(range(k))


def check_perm(p, k: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != k or sorted(p) != list(range(k)):
        raise VoltageError(f"{p!r} is not a permutation of 0..{k - 1}")
    return p


def compose(p: Perm, q: Perm) -> Perm:
    """Function composition: ``compose(p, q)[j] == p[q[j]]`` (q applied first)."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for j, i in enumerate(p):
        inv[i] = j
    return tuple(inv)


def sign(p: Perm) -> int:
    """Parity of the permutation: +1 for even, -1 for odd."""
    seen = [False] * len(p)
    sgn = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def cycle(k: int) -> Perm:
    """The k-cycle 0 -> 1 -> ... -> k-1 -> 0."""
    return tuple((j + 1) % k for j in range(k))


def transposition(k: int, a: int, b: int) -> Perm:
    im = list(range(k))
    im[a], im[b] = im[b], im[a]
    return tuple(im)


def permutation_matrix(p: Perm) -> np.ndarray:
    """k x k 0/1 matrix P with P[p[j], j] = 1."""
    k = len(p)
    mat = np.zeros((k, k), dtype=np.int64)
    for j in range(k):
        mat[p[j], j] = 1
    return mat


def from_one_based(images) -> Perm:
    """Convert a 1-based image list (file format) to a 0-based Perm."""
    images = [int(x) for x in images]
    return check_perm((x - 1 for x in images), len(images))


def to_one_based(p: Perm) -> list:
    return [x + 1 for x in p]
