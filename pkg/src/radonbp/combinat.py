"""Exact combinatorial primitives: binomial coefficients and colexicographic
ranking of k-subsets.

All dictionary indexing in this package is built on the colex order, whose
rank formula does not involve the universe size: growing the node universe
never renumbers existing rows or columns.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Iterator


class KSet(tuple):
    """A sorted set of node ids (0-based integers), hashable and immutable.

    Used both as a dictionary row index (a j-set) and a column index
    (a candidate clique).
    """

    __slots__ = ()

    def __new__(cls, elements: Iterable[int]) -> "KSet":
        elems = sorted(elements)
        for e in elems:
            if not isinstance(e, (int,)) or isinstance(e, bool):
                raise TypeError(f"node ids must be integers, got {e!r}")
            if e < 0:
                raise ValueError(f"node ids must be nonnegative, got {e}")
        for a, b in zip(elems, elems[1:]):
            if a == b:
                raise ValueError(f"duplicate node id {a} in {elems}")
        return tuple.__new__(cls, elems)

    def mask(self) -> int:
        """Bitmask with bit i set for each element i."""
        m = 0
        for e in self:
            m |= 1 << e
        return m

    def __repr__(self) -> str:
        return f"KSet({list(self)})"


def binom(a: int, b: int) -> int:
    """Exact binomial coefficient C(a, b).

    Returns 0 when b < 0 or b > a.  Python integers are exact at any width,
    so the result can never silently alias another index.
    """
    if a < 0:
        raise ValueError(f"binom requires a >= 0, got a={a}")
    if b < 0 or b > a:
        return 0
    return comb(a, b)


class BinomialTable:
    """Precomputed Pascal triangle of exact C(a, b) for all a <= max_n.

    Immutable after construction and safe to share across threads.  Lookups
    beyond the declared width raise OverflowError rather than extrapolating.
    """

    def __init__(self, max_n: int):
        if max_n < 0:
            raise ValueError("max_n must be nonnegative")
        self.max_n = max_n
        rows: list[list[int]] = [[1]]
        for a in range(1, max_n + 1):
            prev = rows[-1]
            row = [1] * (a + 1)
            for b in range(1, a):
                row[b] = prev[b - 1] + prev[b]
            rows.append(row)
        self._rows = rows

    def binom(self, a: int, b: int) -> int:
        if a < 0:
            raise ValueError(f"binom requires a >= 0, got a={a}")
        if a > self.max_n:
            raise OverflowError(
                f"C({a},{b}) exceeds the declared table width max_n={self.max_n}"
            )
        if b < 0 or b > a:
            return 0
        return self._rows[a][b]


def rank_kset(s: KSet | Iterable[int]) -> int:
    """Colexicographic rank of a k-subset: sum over C(s_i, i+1).

    The rank is independent of the universe size n, so indices stay stable
    when the universe grows.
    """
    if not isinstance(s, KSet):
        s = KSet(s)
    return sum(comb(e, i + 1) for i, e in enumerate(s))


def rank_pair(u: int, v: int) -> int:
    """Colex rank of the 2-set {u, v} with u < v: C(v,2) + u."""
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def unrank_kset(r: int, k: int) -> KSet:
    """Inverse of rank_kset: the unique k-subset with colex rank r."""
    if r < 0:
        raise ValueError(f"rank must be nonnegative, got {r}")
    if k < 0:
        raise ValueError(f"subset size must be nonnegative, got {k}")
    out: list[int] = []
    rr = r
    for i in range(k, 0, -1):
        # largest m with C(m, i) <= rr; search upward from the minimum m = i-1
        m = i - 1
        while comb(m + 1, i) <= rr:
            m += 1
        out.append(m)
        rr -= comb(m, i)
    out.reverse()
    return KSet(out)


def intersection_size(a: KSet | Iterable[int], b: KSet | Iterable[int]) -> int:
    """Size of the intersection of two sorted id lists, by linear merge."""
    if not isinstance(a, KSet):
        a = KSet(a)
    if not isinstance(b, KSet):
        b = KSet(b)
    i = j = count = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            count += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return count


def colex_iter(n: int, k: int) -> Iterator[KSet]:
    """All k-subsets of {0..n-1} in colexicographic order.

    Uses the colex successor rule, O(1) amortized per subset.
    """
    if k < 0 or n < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        return
    cur = list(range(k))
    total = comb(n, k)
    for _ in range(total):
        yield KSet(cur)
        # successor: bump the smallest element that has room, reset the prefix
        for i in range(k):
            nxt = cur[i + 1] if i + 1 < k else n
            if cur[i] + 1 < nxt:
                cur[i] += 1
                for p in range(i):
                    cur[p] = p
                break
