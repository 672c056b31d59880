"""Permutation tuples.

A permutation of {0, ..., n-1} is a tuple ``p`` with ``p[i]`` the image of
``i``. Products read left to right: ``compose(p, q)`` applies ``p`` first,
which is the convention of sympy's ``p * q`` and of the right action of the
tree groups on vertices.

Architecture Note:
    Tuples are hashable and cheap to compare, which the word problem relies
    on (memo keys, canonical forms). sympy Permutation objects are only
    built at the boundary, for transitivity and group orders.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from itertools import permutations

from sympy.combinatorics import Permutation

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    """Return the identity permutation of degree n."""
    return tuple(range(n))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """Return p followed by q: ``i -> q[p[i]]``."""
    return tuple(q[x] for x in p)


def compose_all(perms: Iterable[Sequence[int]], n: int) -> Perm:
    """Left-to-right product of a sequence of permutations of degree n."""
    acc: Perm = identity(n)
    for p in perms:
        acc = compose(acc, p)
    return acc


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def transposition(n: int, a: int, b: int) -> Perm:
    """Return the permutation of degree n swapping a and b."""
    p = list(range(n))
    p[a], p[b] = p[b], p[a]
    return tuple(p)


def cycle(n: int, *points: int) -> Perm:
    """Return the cycle ``points[0] -> points[1] -> ... -> points[0]``."""
    p = list(range(n))
    for i, x in enumerate(points):
        p[x] = points[(i + 1) % len(points)]
    return tuple(p)


def all_perms(n: int) -> Iterator[Perm]:
    """Iterate over S_n in lexicographic order."""
    return permutations(range(n))


def is_perm(p: Sequence[int], n: int) -> bool:
    """Check that p is a permutation of {0, ..., n-1}."""
    return len(p) == n and sorted(p) == list(range(n))


def to_sympy(p: Sequence[int]) -> Permutation:
    return Permutation(list(p))


def from_sympy(p: Permutation, n: int) -> Perm:
    """Convert a sympy permutation back to a tuple of degree n."""
    arr = p.array_form
    return tuple(arr[i] if i < len(arr) else i for i in range(n))
