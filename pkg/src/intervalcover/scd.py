"""Greene-Kleitman symmetric chain decomposition of the Boolean lattice B(n).

Subsets of ``[n] = {1, ..., n}`` are Python ints: position ``i`` is bit
``i - 1``.  Pairings and traces use 1-indexed positions.

Scanning a word left to right, each 1 is paired with the rightmost
still-unpaired 0 before it.  Subsets with the same pairing form one
symmetric chain; ``phi`` drops the rightmost pair of a short chain to get a
longer chain nested around it, and ``psi`` uses this to send each k-subset
to a j-subset below it so that the intervals ``[psi(Y), Y]`` cover the slab
between levels j and k.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import MaxChain, PreconditionViolated, SizeLimit

MAX_N = 60
MAX_DECOMPOSITION_N = 20


def positions(mask: int) -> tuple[int, ...]:
    """1-indexed positions of the set bits."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def from_positions(pos, n: int | None = None) -> int:
    m = 0
    for i in pos:
        if n is not None and not 1 <= i <= n:
            raise ValueError(f"position {i} outside 1..{n}")
        m |= 1 << (i - 1)
    return m


def bitstring(mask: int, n: int) -> str:
    """Word a_1 a_2 ... a_n with a_i = 1 iff i is in the subset."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


def parse_bitstring(word: str) -> int:
    return sum(1 << i for i, ch in enumerate(word) if ch == "1")


@dataclass(frozen=True)
class GKPairing:
    pairs: tuple[tuple[int, int], ...]
    u0: tuple[int, ...]
    u1: tuple[int, ...]


@lru_cache(maxsize=None)
def pair_positions(A: int, n: int) -> GKPairing:
    if not 0 <= n <= MAX_N:
        raise SizeLimit(f"n must be at most {MAX_N}")
    stack: list[int] = []
    pairs, u1 = [], []
    for i in range(1, n + 1):
        if A >> (i - 1) & 1:
            if stack:
                pairs.append((stack.pop(), i))
            else:
                u1.append(i)
        else:
            stack.append(i)
    return GKPairing(tuple(sorted(pairs)), tuple(stack), tuple(u1))


@dataclass(frozen=True)
class SymChain:
    n: int
    elements: tuple[int, ...]

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def length(self) -> int:
        """Number of cover steps, m for the chain c_0 < ... < c_m."""
        return len(self.elements) - 1

    def is_symmetric(self) -> bool:
        els = self.elements
        steps_ok = all(
            (y & x) == x and (y ^ x).bit_count() == 1 for x, y in zip(els, els[1:])
        )
        return steps_ok and self.min.bit_count() + self.max.bit_count() == self.n

    def level_element(self, size: int) -> int | None:
        for x in self.elements:
            if x.bit_count() == size:
                return x
        return None

    def words(self) -> list[str]:
        return [bitstring(x, self.n) for x in self.elements]


@lru_cache(maxsize=None)
def chain_of(A: int, n: int) -> SymChain:
    """The chain of the decomposition through A."""
    p = pair_positions(A, n)
    bottom = A & ~from_positions(p.u1)
    els = [bottom]
    cur = bottom
    # U1 ones were removed right to left, so they come back left to right
    for i in p.u1 + p.u0:
        cur |= 1 << (i - 1)
        els.append(cur)
    return SymChain(n, tuple(els))


@dataclass(frozen=True)
class SCD:
    n: int
    chains: tuple[SymChain, ...]

    def chain_index(self) -> dict[int, int]:
        return {x: i for i, c in enumerate(self.chains) for x in c.elements}

    def verify(self) -> dict:
        """Check partition, symmetry and the nesting property for every short chain."""
        seen = set()
        partition = True
        for c in self.chains:
            for x in c.elements:
                if x in seen:
                    partition = False
                seen.add(x)
        partition = partition and len(seen) == 1 << self.n
        symmetric = all(c.is_symmetric() for c in self.chains)
        star = all(star_holds(c, phi(c)) for c in self.chains if c.length < self.n)
        return {
            "partition": partition,
            "symmetric": symmetric,
            "star": star,
            "chains": len(self.chains),
            "expected_chains": comb(self.n, self.n // 2),
        }


def gk_decomposition(n: int) -> SCD:
    """All symmetric chains of B(n), one per pairing, ordered by their minimum."""
    if not 1 <= n <= MAX_DECOMPOSITION_N:
        raise SizeLimit(f"decomposition supported for 1 <= n <= {MAX_DECOMPOSITION_N}")
    chains = []
    for A in range(1 << n):
        # chain minima are exactly the subsets with no unpaired 1
        if not pair_positions(A, n).u1:
            chains.append(chain_of(A, n))
    return SCD(n, tuple(chains))


def star_holds(C: SymChain, D: SymChain) -> bool:
    """min D < min C <= max C < max D, both outer steps being covers."""

    def covers(x, y):
        return (y & x) == x and (y ^ x).bit_count() == 1

    return covers(D.min, C.min) and covers(C.max, D.max)


@lru_cache(maxsize=None)
def _phi_min(X: int, n: int) -> int:
    p = pair_positions(X, n)
    if not p.pairs:
        raise MaxChain("chain has maximum length; no pair to remove")
    j, i = max(p.pairs, key=lambda ji: ji[1])
    return X & ~(1 << (i - 1))


def phi(C: SymChain) -> SymChain:
    """Remove the rightmost pair (j, i): the minimum loses i, the maximum gains j."""
    return chain_of(_phi_min(C.min, C.n), C.n)


def psi(Y: int, j: int, n: int) -> int:
    """Send a k-subset Y (j <= k, j + k <= n) to a j-subset below its chain."""
    k = Y.bit_count()
    if not (0 <= j <= k and j + k <= n) or Y >> n:
        raise PreconditionViolated(f"psi needs 0 <= j <= |Y| and j + |Y| <= n (j={j}, |Y|={k}, n={n})")
    C = chain_of(Y, n)
    lo = C.min.bit_count()
    if lo <= j:
        return C.level_element(j)
    X = C.min
    for _ in range(lo - j):
        X = _phi_min(X, n)
    return X


def level_subsets(n: int, k: int) -> list[int]:
    """All k-subsets of [n] as ints, increasing."""
    from itertools import combinations

    return sorted(sum(1 << i for i in c) for c in combinations(range(n), k))


def boolean_level_pairs(n: int, j: int, k: int) -> list[tuple[int, int]]:
    """Endpoints (X, Y) of a minimum cover of B(n)_{j,k} by intervals [X, Y]."""
    if not 0 <= j <= k <= n:
        raise PreconditionViolated("need 0 <= j <= k <= n")
    if j + k <= n:
        return [(psi(Y, j, n), Y) for Y in level_subsets(n, k)]
    # complement: solve for levels (n-k, n-j) and map S -> [n] - S
    full = (1 << n) - 1
    return sorted(
        (full & ~Y, full & ~X) for X, Y in boolean_level_pairs(n, n - k, n - j)
    )


def boolean_level_cover(n: int, j: int, k: int):
    """Cover of the slab between levels j and k of B(n) as an IntervalCover.

    The host poset is B(n) with each subset's int as its element index.
    """
    from .cover import Interval, IntervalCover
    from .families import boolean_poset
    from .poset import ConvexSpan

    pairs = boolean_level_pairs(n, j, k)
    P = boolean_poset(n)
    lower = frozenset(level_subsets(n, j))
    upper = frozenset(level_subsets(n, k))
    elements = frozenset(x for x in range(1 << n) if j <= x.bit_count() <= k)
    span = ConvexSpan(P, lower, upper, elements)
    return IntervalCover(
        span,
        [Interval(X, Y) for X, Y in pairs],
        trace={"method": "greene-kleitman", "complemented": j + k > n},
    )
