"""Finite posets over the ground set ``range(n)``.

The order is held as a dense, read-only boolean matrix ``leq`` with
``leq[x, y]`` true iff ``x <= y``.  Most algorithms in the package work on
Python-int bitsets derived from it (``down[x]`` and ``up[x]``), which keeps
subset operations cheap at the sizes we care about.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import CycleDetected, ElementOutOfRange, NotDominated, NotRanked

# exhaustive antichain search up to this size, Dilworth matching above it
EXHAUSTIVE_WIDTH_LIMIT = 24


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def _mask_rows(matrix: np.ndarray) -> tuple[int, ...]:
    """Row i of a boolean matrix as an int with bit j set iff matrix[i, j]."""
    n = matrix.shape[1]
    if n == 0:
        return tuple(0 for _ in range(matrix.shape[0]))
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


class Poset:
    """Immutable finite poset on ``range(n)``.

    Construct with :func:`build_poset` from cover edges, or directly from a
    boolean ``leq`` matrix (validated unless ``check=False``).
    """

    def __init__(self, leq, labels: Sequence | None = None, *, check: bool = True):
        leq = np.array(leq, dtype=bool, copy=True)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError(f"leq must be a square matrix, got shape {leq.shape}")
        n = leq.shape[0]
        if check:
            if not leq.diagonal().all():
                raise ValueError("order relation is not reflexive")
            off = leq & leq.T
            np.fill_diagonal(off, False)
            if off.any():
                raise CycleDetected("order relation is not antisymmetric")
            li = leq.astype(np.int32)
            if ((li @ li > 0) & ~leq).any():
                raise ValueError("order relation is not transitive")
        leq.flags.writeable = False
        self.n = n
        self.leq = leq
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per element")
        self.labels = labels

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={list(self.covers)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and np.array_equal(self.leq, other.leq)

    def __hash__(self) -> int:
        return hash((self.n, self.leq.tobytes()))

    def label(self, x: int):
        return x if self.labels is None else self.labels[x]

    @cached_property
    def lt(self) -> np.ndarray:
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        lt.flags.writeable = False
        return lt

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        lt = self.lt.astype(np.int32)
        cov = self.lt & ~((lt @ lt) > 0)
        cov.flags.writeable = False
        return cov

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        xs, ys = np.nonzero(self.cover_matrix)
        return tuple(zip(xs.tolist(), ys.tolist()))

    @cached_property
    def down(self) -> tuple[int, ...]:
        """``down[x]``: bitset of all y <= x."""
        return _mask_rows(self.leq.T)

    @cached_property
    def up(self) -> tuple[int, ...]:
        """``up[x]``: bitset of all y >= x."""
        return _mask_rows(self.leq)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        return _mask_rows(self.cover_matrix.T)

    @cached_property
    def upper_covers(self) -> tuple[int, ...]:
        return _mask_rows(self.cover_matrix)

    @cached_property
    def comparable(self) -> tuple[int, ...]:
        """Bitset of elements strictly comparable to x."""
        return tuple((d | u) & ~(1 << x) for x, (d, u) in enumerate(zip(self.down, self.up)))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_elements(self, elements: Iterable[int]) -> frozenset[int]:
        s = frozenset(int(x) for x in elements)
        for x in s:
            if not 0 <= x < self.n:
                raise ElementOutOfRange(f"element {x} not in range(0, {self.n})")
        return s

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def minimal(self, subset: Iterable[int] | None = None) -> frozenset[int]:
        s = self.full_mask if subset is None else to_mask(subset)
        return frozenset(x for x in iter_bits(s) if self.down[x] & s == 1 << x)

    def maximal(self, subset: Iterable[int] | None = None) -> frozenset[int]:
        s = self.full_mask if subset is None else to_mask(subset)
        return frozenset(x for x in iter_bits(s) if self.up[x] & s == 1 << x)

    def is_antichain(self, subset: Iterable[int]) -> bool:
        s = to_mask(subset)
        return all(self.comparable[x] & s == 0 for x in iter_bits(s))

    def interval(self, a: int, b: int) -> frozenset[int]:
        return from_mask(self.up[a] & self.down[b])

    def interval_mask(self, a: int, b: int) -> int:
        return self.up[a] & self.down[b]

    def induced(self, subset: Iterable[int]) -> tuple["Poset", tuple[int, ...]]:
        """Subposet on ``subset``; returns it with the original indices in order."""
        idx = tuple(sorted(set(subset)))
        sub = self.leq[np.ix_(idx, idx)]
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return Poset(sub, labels, check=False), idx

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Kahn's algorithm, always taking the smallest available index."""
        import heapq

        remaining_below = [self.lower_covers[x].bit_count() for x in range(self.n)]
        heap = [x for x in range(self.n) if remaining_below[x] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            x = heapq.heappop(heap)
            order.append(x)
            for y in iter_bits(self.upper_covers[x]):
                remaining_below[y] -= 1
                if remaining_below[y] == 0:
                    heapq.heappush(heap, y)
        return tuple(order)

    @cached_property
    def _ideal_masks(self) -> tuple[int, ...]:
        return tuple(_ideal_masks(self))


def build_poset(cover_edges: Iterable[tuple[int, int]], size: int, labels: Sequence | None = None) -> Poset:
    """Poset whose order is the reflexive-transitive closure of ``cover_edges``.

    >>> P = build_poset([(0, 1), (1, 2)], 3)
    >>> P.le(0, 2)
    True
    """
    leq = np.eye(size, dtype=bool)
    for u, v in cover_edges:
        if not (0 <= u < size and 0 <= v < size):
            raise ElementOutOfRange(f"edge ({u}, {v}) references an element outside range(0, {size})")
        if u == v:
            raise CycleDetected(f"self-loop on element {u}")
        leq[u, v] = True
    for k in range(size):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        x, y = map(int, np.argwhere(both)[0])
        raise CycleDetected(f"elements {x} and {y} lie on a directed cycle")
    return Poset(leq, labels, check=False)


def chain(n: int) -> Poset:
    return build_poset([(i, i + 1) for i in range(n - 1)], n)


def antichain(n: int) -> Poset:
    return Poset(np.eye(n, dtype=bool), check=False)


def generated_set(P: Poset, S: Iterable[int], direction: str = "down") -> frozenset[int]:
    """The order ideal (``"down"``) or filter (``"up"``) generated by S."""
    S = P.check_elements(S)
    table = {"down": P.down, "up": P.up}[direction]
    m = 0
    for x in S:
        m |= table[x]
    return from_mask(m)


def downset_mask(P: Poset, mask: int) -> int:
    m = 0
    for x in iter_bits(mask):
        m |= P.down[x]
    return m


def upset_mask(P: Poset, mask: int) -> int:
    m = 0
    for x in iter_bits(mask):
        m |= P.up[x]
    return m


def is_convex(P: Poset, S: Iterable[int]) -> bool:
    return is_convex_mask(P, to_mask(P.check_elements(S)))


def is_convex_mask(P: Poset, s: int) -> bool:
    outside = P.full_mask & ~s
    for x in iter_bits(outside):
        if P.down[x] & s and P.up[x] & s:
            return False
    return True


class AntichainRelations(NamedTuple):
    le: bool
    not_ge: bool


def antichain_relations(P: Poset, A: Iterable[int], B: Iterable[int]) -> AntichainRelations:
    """Evaluate ``A <= B`` and ``A not>= B``.

    ``le``: every a lies below some b and every b above some a.
    ``not_ge``: every a fails to be above some b, and every b fails to be
    below some a.  This is not the negation of ``B <= A``.
    """
    A = P.check_elements(A)
    B = P.check_elements(B)
    a_mask, b_mask = to_mask(A), to_mask(B)
    le = all(P.up[a] & b_mask for a in A) and all(P.down[b] & a_mask for b in B)
    # a not>= b for some b  <=>  B is not inside down(a)
    not_ge = all(b_mask & ~P.down[a] for a in A) and all(a_mask & ~P.up[b] for b in B)
    return AntichainRelations(le, not_ge)


@dataclass(frozen=True)
class ConvexSpan:
    """The convex hull ``[A, B] = {x : a <= x <= b for some a in A, b in B}``."""

    host: Poset
    lower: frozenset[int]
    upper: frozenset[int]
    elements: frozenset[int]

    @property
    def mask(self) -> int:
        return to_mask(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements


def convex_span(P: Poset, A: Iterable[int], B: Iterable[int]) -> ConvexSpan:
    A = P.check_elements(A)
    B = P.check_elements(B)
    if not A or not B or not antichain_relations(P, A, B).le:
        raise NotDominated("convex span requires A <= B")
    elements = from_mask(upset_mask(P, to_mask(A)) & downset_mask(P, to_mask(B)))
    return ConvexSpan(P, A, B, elements)


@dataclass(frozen=True)
class RankProfile:
    rank: tuple[int, ...]
    levels: tuple[frozenset[int], ...]

    @property
    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    @property
    def height(self) -> int:
        """r(P), the largest rank."""
        return len(self.levels) - 1

    def slab(self, j: int, k: int) -> frozenset[int]:
        """Union of levels j..k."""
        return frozenset().union(*self.levels[j : k + 1])


def rank_profile(P: Poset) -> RankProfile:
    """Rank function with minimal elements at 0 and +1 along every cover.

    Raises NotRanked when two cover paths force different ranks.
    """
    rank = [-1] * P.n
    for z in P.linear_extension:
        lower = list(iter_bits(P.lower_covers[z]))
        if not lower:
            rank[z] = 0
            continue
        ranks = {rank[y] for y in lower}
        if len(ranks) != 1:
            raise NotRanked(
                f"element {z} covers elements of ranks {sorted(ranks)}; no consistent rank function"
            )
        rank[z] = ranks.pop() + 1
    height = max(rank, default=-1)
    levels = [set() for _ in range(height + 1)]
    for x, r in enumerate(rank):
        levels[r].add(x)
    return RankProfile(tuple(rank), tuple(frozenset(level) for level in levels))


def _max_antichain_exhaustive(comparable: Sequence[int], candidates: int) -> int:
    best_mask, best_size = 0, 0

    def search(cand: int, current: int, size: int) -> None:
        nonlocal best_mask, best_size
        while cand:
            if size + cand.bit_count() <= best_size:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            if comparable[v] & cand:
                search(cand & ~comparable[v] & ~low, current | low, size + 1)
                cand &= ~low
            else:
                # incomparable to everything left: always take it
                cand &= ~low
                current |= low
                size += 1
        if size > best_size:
            best_mask, best_size = current, size

    search(candidates, 0, 0)
    return best_mask


def max_antichain_mask(P: Poset, subset_mask: int | None = None) -> int:
    """A maximum antichain inside ``subset_mask`` (whole poset by default)."""
    s = P.full_mask if subset_mask is None else subset_mask
    return _max_antichain_exhaustive(P.comparable, s)


def dilworth_width(P: Poset) -> int:
    """Width via Dilworth: n minus a maximum matching in the strict-order graph."""
    if P.n == 0:
        return 0
    graph = csr_matrix(P.lt.astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return P.n - int((match >= 0).sum())


def width(P: Poset) -> int:
    """Size of a largest antichain."""
    if P.n <= EXHAUSTIVE_WIDTH_LIMIT:
        return max_antichain_mask(P).bit_count()
    return dilworth_width(P)


def dual(P: Poset) -> Poset:
    return Poset(P.leq.T, P.labels, check=False)


def _ideal_masks(P: Poset) -> Iterator[int]:
    # Decide elements from the top of the linear extension downwards,
    # excluded before included, so the output is sorted by the key
    # sum(chi(L[i]) * 2**i).
    L = P.linear_extension
    n = P.n
    strict_up = [P.up[x] & ~(1 << x) for x in range(n)]

    def rec(i: int, mask: int) -> Iterator[int]:
        if i < 0:
            yield mask
            return
        x = L[i]
        if strict_up[x] & mask == 0:
            yield from rec(i - 1, mask)
        # including x forces nothing above it to be missing; lower elements
        # are constrained when they are reached
        yield from rec(i - 1, mask | (1 << x))

    yield from rec(n - 1, 0)


def ideal_masks(P: Poset) -> tuple[int, ...]:
    """All downsets as bitsets, in the canonical order (cached on P)."""
    return P._ideal_masks


def enumerate_ideals(P: Poset) -> Iterator[frozenset[int]]:
    """Every downset exactly once, ordered colexicographically along the
    smallest-index linear extension (so the empty ideal comes first and
    containment implies earlier position)."""
    for m in ideal_masks(P):
        yield from_mask(m)


def antichain_masks(P: Poset) -> tuple[int, ...]:
    """Every antichain (as a bitset), via the maximal elements of each ideal."""
    out = []
    for m in ideal_masks(P):
        out.append(sum(1 << x for x in iter_bits(m) if P.up[x] & m == 1 << x))
    return tuple(out)


# --- ".poset" text format ---------------------------------------------------


def parse_poset(text: str) -> Poset:
    """Parse the ``.poset`` format: first line n, then "u v" cover edges."""
    size = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if size is None:
            if len(fields) != 1:
                raise ValueError(f"line {lineno}: expected element count, got {raw!r}")
            size = int(fields[0])
            if size < 0:
                raise ValueError(f"line {lineno}: negative element count")
            continue
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        edges.append((int(fields[0]), int(fields[1])))
    if size is None:
        raise ValueError("empty poset file")
    return build_poset(edges, size)


def format_poset(P: Poset, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(str(P.n))
    lines.extend(f"{u} {v}" for u, v in P.covers)
    return "\n".join(lines) + "\n"


def read_poset(path) -> Poset:
    return parse_poset(Path(path).read_text())


def write_poset(P: Poset, path, comment: str | None = None) -> None:
    Path(path).write_text(format_poset(P, comment))
