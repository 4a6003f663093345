"""Implicit clique dictionary: candidate clique columns over j-set rows.

Entries, gram values and matrix-vector products are computed combinatorially
from the candidate list; the matrix itself is only materialized on demand for
small instances.  Columns are normalized to unit l2 norm: a column for clique
tau has C(|tau|, j) nonzero entries of value 1/sqrt(C(|tau|, j)).

Row indexing is fixed to colex order over j-sets throughout the package.
"""

from __future__ import annotations

from itertools import combinations
from math import comb, sqrt
from typing import Iterable, Iterator, Mapping

import numpy as np

from .combinat import KSet, colex_iter, rank_kset, rank_pair

DEFAULT_ENUMERATION_CAP = 2_000_000
DEFAULT_DENSE_ENTRY_CAP = 50_000_000


class EnumerationCapError(ValueError):
    """Raised when a requested dense enumeration would exceed the column cap."""


class SparseSignal:
    """Sparse map from clique to real weight: the unknown x and solver output.

    Zero-weight entries are never stored.  Weights are in unit-norm column
    units; see :func:`to_raw_weights` for the 0/1-entry convention.
    """

    def __init__(self, entries: Mapping[KSet, float] | Iterable[tuple[Iterable[int], float]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        store: dict[KSet, float] = {}
        for clique, weight in items:
            if not isinstance(clique, KSet):
                clique = KSet(clique)
            w = float(weight)
            if w != 0.0:
                if clique in store:
                    raise ValueError(f"duplicate clique {clique}")
                store[clique] = w
        # deterministic iteration: by (size, colex rank)
        self.entries: dict[KSet, float] = dict(
            sorted(store.items(), key=lambda kv: (len(kv[0]), rank_kset(kv[0])))
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[KSet, float]]:
        return iter(self.entries.items())

    def __contains__(self, clique) -> bool:
        if not isinstance(clique, KSet):
            clique = KSet(clique)
        return clique in self.entries

    def get(self, clique, default: float = 0.0) -> float:
        if not isinstance(clique, KSet):
            clique = KSet(clique)
        return self.entries.get(clique, default)

    def support(self) -> list[KSet]:
        return list(self.entries)

    def norm1(self) -> float:
        return float(sum(abs(w) for w in self.entries.values()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseSignal):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"SparseSignal({self.entries!r})"


def to_raw_weights(signal: SparseSignal, j: int) -> SparseSignal:
    """Convert weights from unit-norm column units to raw 0/1-entry units.

    A clique of size k with unit-column weight w contributes w/sqrt(C(k,j))
    to each of its j-sets, which is its weight against the unnormalized 0/1
    incidence columns.
    """
    return SparseSignal(
        [(c, w / sqrt(comb(len(c), j))) for c, w in signal]
    )


def gram_entry(tau1: KSet, tau2: KSet, j: int) -> float:
    """Inner product of the two normalized columns, without enumerating rows.

    Equals C(|tau1 ∩ tau2|, j) / sqrt(C(|tau1|, j) * C(|tau2|, j)).
    """
    if not isinstance(tau1, KSet):
        tau1 = KSet(tau1)
    if not isinstance(tau2, KSet):
        tau2 = KSet(tau2)
    if len(tau1) < j or len(tau2) < j:
        raise ValueError("cliques must have size >= j")
    overlap = len(set(tau1) & set(tau2))
    num = comb(overlap, j) if overlap >= j else 0
    if num == 0:
        return 0.0
    return num / sqrt(comb(len(tau1), j) * comb(len(tau2), j))


def _rank_jset(sigma: tuple[int, ...], j: int) -> int:
    if j == 2:
        return rank_pair(sigma[0], sigma[1])
    return rank_kset(sigma)


class CliqueDictionary:
    """Candidate clique columns over all j-sets of an n-node universe.

    Immutable after construction; all products are pure functions with a
    fixed summation order, so instances may be shared across threads.
    """

    def __init__(self, n: int, j: int, candidates: Iterable[KSet | Iterable[int]]):
        if j < 2:
            raise ValueError(f"observation order j must be >= 2, got {j}")
        if n < j:
            raise ValueError(f"universe size n={n} smaller than j={j}")
        self.n = n
        self.j = j
        cand: list[KSet] = []
        index: dict[KSet, int] = {}
        for c in candidates:
            if not isinstance(c, KSet):
                c = KSet(c)
            if len(c) < j:
                raise ValueError(f"candidate {c} smaller than j={j}")
            if c and c[-1] >= n:
                raise ValueError(f"candidate {c} has node id >= n={n}")
            if c in index:
                raise ValueError(f"duplicate candidate {c}")
            index[c] = len(cand)
            cand.append(c)
        self.candidates: tuple[KSet, ...] = tuple(cand)
        self._index = index
        self.row_count = comb(n, j)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(sorted({len(c) for c in self.candidates}))

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self) -> Iterator[KSet]:
        return iter(self.candidates)

    def __contains__(self, clique) -> bool:
        if not isinstance(clique, KSet):
            clique = KSet(clique)
        return clique in self._index

    def index_of(self, clique) -> int:
        if not isinstance(clique, KSet):
            clique = KSet(clique)
        return self._index[clique]

    def column_entry(self, sigma: KSet, tau: KSet) -> float:
        """Entry at row sigma (a j-set) and the column of clique tau."""
        if not isinstance(sigma, KSet):
            sigma = KSet(sigma)
        if not isinstance(tau, KSet):
            tau = KSet(tau)
        if len(sigma) != self.j:
            raise ValueError(f"row index must be a {self.j}-set, got size {len(sigma)}")
        if not set(sigma) <= set(tau):
            return 0.0
        return 1.0 / sqrt(comb(len(tau), self.j))

    def column(self, tau: KSet) -> np.ndarray:
        """Dense column for clique tau over all C(n,j) rows."""
        if not isinstance(tau, KSet):
            tau = KSet(tau)
        out = np.zeros(self.row_count)
        value = 1.0 / sqrt(comb(len(tau), self.j))
        for sigma in combinations(tau, self.j):
            out[_rank_jset(sigma, self.j)] = value
        return out

    def apply(self, x: SparseSignal) -> np.ndarray:
        """b = A x: dense vector over colex-ordered j-sets.

        x must be supported on the candidate list.
        """
        out = np.zeros(self.row_count)
        j = self.j
        for tau, w in x:
            if tau not in self._index:
                raise ValueError(f"signal clique {tau} is not a dictionary candidate")
            value = w / sqrt(comb(len(tau), j))
            for sigma in combinations(tau, j):
                out[_rank_jset(sigma, j)] += value
        return out

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        """A* y: per-candidate correlations, enumerating only each clique's j-subsets."""
        y = np.asarray(y, dtype=float)
        if y.shape != (self.row_count,):
            raise ValueError(
                f"expected a vector of length {self.row_count}, got shape {y.shape}"
            )
        j = self.j
        out = np.empty(len(self.candidates))
        for i, tau in enumerate(self.candidates):
            acc = 0.0
            for sigma in combinations(tau, j):
                acc += y[_rank_jset(sigma, j)]
            out[i] = acc / sqrt(comb(len(tau), j))
        return out

    def materialize(self, max_entries: int = DEFAULT_DENSE_ENTRY_CAP) -> np.ndarray:
        """Dense row_count x n_candidates matrix, for small instances only."""
        total = self.row_count * len(self.candidates)
        if total > max_entries:
            raise EnumerationCapError(
                f"dense matrix would have {total} entries (cap {max_entries})"
            )
        a = np.zeros((self.row_count, len(self.candidates)))
        j = self.j
        for col, tau in enumerate(self.candidates):
            value = 1.0 / sqrt(comb(len(tau), j))
            for sigma in combinations(tau, j):
                a[_rank_jset(sigma, j), col] = value
        return a


def enumerate_full(
    n: int, j: int, k: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> CliqueDictionary:
    """Dictionary whose candidates are all k-subsets of {0..n-1} in colex order."""
    if k < j:
        raise ValueError(f"clique size k={k} must be >= j={j}")
    if k > n:
        raise ValueError(f"clique size k={k} exceeds universe n={n}")
    count = comb(n, k)
    if count > cap:
        raise EnumerationCapError(
            f"C({n},{k}) = {count} columns exceeds the enumeration cap {cap}; "
            "use the column-generation solver (colgen.cutting_plane_solve) instead"
        )
    return CliqueDictionary(n, j, colex_iter(n, k))


def concatenated(
    n: int, j: int, sizes: Iterable[int], cap: int = DEFAULT_ENUMERATION_CAP
) -> CliqueDictionary:
    """Dictionary concatenating all cliques of each size in `sizes` (colex within size)."""
    sizes = sorted(set(sizes))
    total = 0
    for k in sizes:
        if k < j or k > n:
            raise ValueError(f"size {k} out of range [{j}, {n}]")
        total += comb(n, k)
    if total > cap:
        raise EnumerationCapError(
            f"{total} columns exceeds the enumeration cap {cap}; "
            "use the column-generation solver (colgen.cutting_plane_solve) instead"
        )

    def _iter():
        for k in sizes:
            yield from colex_iter(n, k)

    return CliqueDictionary(n, j, _iter())
