"""Bitmask core shared by the spectrum engine and the search.

A class is reduced to ``ranks`` (one entry per type) and ``edges`` (one type
bitmask per prime of the index, the types whose mu that prime divides).  An
indecomposable decomposition is a set partition of the primes into groups
whose edges form a connected hypergraph, such that each type lies in at most
``rank`` group unions; leftover copies of a type are rank-1 summands.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

import numpy as np


def popcount(x: int) -> int:
    return x.bit_count()


def bits(x: int) -> list[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def is_connected(edges: Sequence[int]) -> bool:
    """True when the hyperedges form one component (vacuously for none)."""
    if not edges:
        return True
    covered = edges[0]
    pending = list(edges[1:])
    grew = True
    while pending and grew:
        grew = False
        rest = []
        for e in pending:
            if e & covered:
                covered |= e
                grew = True
            else:
                rest.append(e)
        pending = rest
    return not pending


class Hypergraph:
    """Prime-support hypergraph with per-subset unions and connectivity."""

    __slots__ = ("ranks", "edges", "n", "m", "union", "conn", "size")

    def __init__(self, ranks: Sequence[int], edges: Sequence[int]):
        self.ranks = tuple(ranks)
        self.edges = tuple(edges)
        self.n = sum(self.ranks)
        self.m = m = len(self.edges)
        union = [0] * (1 << m)
        conn = [False] * (1 << m)
        for s in range(1, 1 << m):
            low = s & -s
            union[s] = union[s ^ low] | self.edges[low.bit_length() - 1]
            conn[s] = is_connected([self.edges[i] for i in bits(s)])
        self.union = union
        self.conn = conn
        self.size = [popcount(u) for u in union]

    def _groups(self, remaining: int, cov: list[int], need: list[int] | None, max_size: int,
                chosen: list[int]) -> Iterator[list[int]]:
        if not remaining:
            if need is None or not any(need):
                yield chosen
            return
        if need is not None and sum(need) > popcount(remaining):
            return
        low = remaining & -remaining
        rest = remaining ^ low
        sub = rest
        ranks = self.ranks
        while True:
            s = sub | low
            size = self.size[s]
            if self.conn[s] and size <= max_size and (need is None or need[size]):
                members = bits(self.union[s])
                if all(cov[t] < ranks[t] for t in members):
                    for t in members:
                        cov[t] += 1
                    if need is not None:
                        need[size] -= 1
                    chosen.append(s)
                    yield from self._groups(remaining ^ s, cov, need, max_size, chosen)
                    chosen.pop()
                    if need is not None:
                        need[size] += 1
                    for t in members:
                        cov[t] -= 1
            if not sub:
                break
            sub = (sub - 1) & rest

    def decompositions(self) -> Iterator[list[int]]:
        """Every valid grouping, as a list of prime-subset bitmasks."""
        cov = [0] * len(self.ranks)
        for groups in self._groups((1 << self.m) - 1, cov, None, self.n, []):
            yield list(groups)

    def partition_of(self, groups: Sequence[int]) -> tuple[int, ...]:
        sizes = [self.size[s] for s in groups]
        return tuple(sorted(sizes, reverse=True)) + (1,) * (self.n - sum(sizes))

    def spectrum(self) -> set[tuple[int, ...]]:
        return {self.partition_of(g) for g in self.decompositions()}

    def realizes(self, parts: Sequence[int]) -> bool:
        if sum(parts) != self.n:
            return False
        big = [p for p in parts if p >= 2]
        need = [0] * (max(big, default=1) + 1)
        for p in big:
            need[p] += 1
        cov = [0] * len(self.ranks)
        for _ in self._groups((1 << self.m) - 1, cov, need, len(need) - 1, []):
            return True
        return False


# --- canonical forms -------------------------------------------------------

#: Above this many table cells the canonicalizer gives up on exactness.
TABLE_LIMIT = 1 << 22


class Canonicalizer:
    """Canonical edge multisets under permutations of equal-rank types.

    ``ranks`` must be sorted so each rank class is contiguous.  When the
    permutation group is too large the key is only a sorted edge tuple, so
    relabelled duplicates survive; that costs time, not correctness.
    """

    def __init__(self, ranks: Sequence[int]):
        self.ranks = tuple(ranks)
        r = len(self.ranks)
        classes = [list(g) for _, g in itertools.groupby(range(r), key=lambda i: self.ranks[i])]
        order = math.prod(math.factorial(len(c)) for c in classes)
        self.exact = order * (1 << r) <= TABLE_LIMIT
        self.table = None
        if self.exact and r:
            perms = []
            for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
                perm = [0] * r
                for cls, img in zip(classes, choice):
                    for a, b in zip(cls, img):
                        perm[a] = b
                perms.append(perm)
            masks = np.arange(1 << r, dtype=np.int64)
            bitmat = (masks[:, None] >> np.arange(r)) & 1
            weights = np.left_shift(1, np.array(perms, dtype=np.int64)).T
            self.table = np.ascontiguousarray((bitmat @ weights).T)

    def key(self, edges: Sequence[int]) -> tuple[int, ...]:
        if not edges:
            return ()
        if self.table is None:
            return tuple(sorted(edges))
        images = np.sort(self.table[:, list(edges)], axis=1)
        best = np.lexsort(images.T[::-1])[0]
        return tuple(int(x) for x in images[best])
