"""Generators for the example families plus exhaustive and random poset corpora."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .birkhoff import DistributiveLattice, Lattice, distributivity_certificate
from .errors import InternalConsistencyError, ParamTooSmall, SizeLimit
from .poset import Poset, build_poset, ideal_masks, iter_bits

MAX_BOOLEAN_N = 12
MAX_PRODUCT_SIZE = 4096
MAX_ALL_POSETS_N = 7


# --- Boolean lattices and chain products -----------------------------------


@lru_cache(maxsize=16)
def boolean_poset(n: int) -> Poset:
    """B(n) with element index equal to the subset's bitmask."""
    if not 0 <= n <= MAX_BOOLEAN_N:
        raise SizeLimit(f"B(n) is materialised only for n <= {MAX_BOOLEAN_N}")
    ar = np.arange(1 << n)
    leq = (ar[:, None] & ~ar[None, :]) == 0
    return Poset(leq, check=False)


def gen_boolean(n: int) -> DistributiveLattice:
    if not 1 <= n <= MAX_BOOLEAN_N:
        raise SizeLimit(f"gen_boolean supports 1 <= n <= {MAX_BOOLEAN_N}")
    ar = np.arange(1 << n, dtype=np.int32)

    def tables():
        return ar[:, None] | ar[None, :], ar[:, None] & ar[None, :]

    return DistributiveLattice(boolean_poset(n), certificate="product", lazy_tables=tables)


def gen_chain_product(lengths) -> DistributiveLattice:
    """Product of chains with the given numbers of elements, in lexicographic order."""
    lengths = [int(k) for k in lengths]
    if not lengths or min(lengths) < 1:
        raise ParamTooSmall("chain lengths must be positive")
    size = prod(lengths)
    if size > MAX_PRODUCT_SIZE:
        raise SizeLimit(f"product has {size} elements; limit is {MAX_PRODUCT_SIZE}")
    coords = np.array(list(itertools.product(*[range(k) for k in lengths])), dtype=np.int32)
    coords = coords.reshape(size, len(lengths))
    leq = (coords[:, None, :] <= coords[None, :, :]).all(axis=2)
    radix = np.array([prod(lengths[i + 1 :]) for i in range(len(lengths))], dtype=np.int32)

    def tables():
        hi = np.maximum(coords[:, None, :], coords[None, :, :]) @ radix
        lo = np.minimum(coords[:, None, :], coords[None, :, :]) @ radix
        return hi.astype(np.int32), lo.astype(np.int32)

    labels = [tuple(int(v) for v in row) for row in coords]
    return DistributiveLattice(Poset(leq, labels, check=False), certificate="product", lazy_tables=tables)


def gen_frankl(r: int, s: int) -> tuple[DistributiveLattice, frozenset[int], frozenset[int]]:
    """B(r + s) with X = {1..r}, Y = {r+1..r+s}; returns (B, singletons of X, X + y_j)."""
    if r < 1 or s < 1:
        raise ParamTooSmall("r and s must be at least 1")
    if r + s > MAX_BOOLEAN_N:
        raise SizeLimit(f"r + s must be at most {MAX_BOOLEAN_N}")
    X = (1 << r) - 1
    lower = frozenset(1 << i for i in range(r))
    upper = frozenset(X | 1 << (r + j) for j in range(s))
    return gen_boolean(r + s), lower, upper


# --- hand-built lattices ----------------------------------------------------


@dataclass(frozen=True)
class Figure1Layout:
    r: int
    s: int

    @property
    def bottom(self) -> int:
        return 0

    def a(self, i: int) -> int:
        return 1 + i

    @property
    def x(self) -> int:
        return 1 + self.r

    def x_ij(self, i: int, j: int) -> int:
        return 2 + self.r + i * self.s + j

    def c(self, j: int) -> int:
        return 2 + self.r + self.r * self.s + j

    @property
    def top(self) -> int:
        return 2 + self.r + self.r * self.s + self.s

    @property
    def size(self) -> int:
        return self.top + 1


def gen_figure1(r: int, s: int) -> Lattice:
    """Atoms a_i, coatoms c_j, a middle x above every atom and below every
    coatom, and one private x_ij per atom-coatom pair.  A lattice, but not a
    distributive one."""
    if r < 2 or s < 2:
        raise ParamTooSmall("figure-1 lattice needs r, s >= 2")
    lay = Figure1Layout(r, s)
    edges = []
    for i in range(r):
        edges.append((lay.bottom, lay.a(i)))
        edges.append((lay.a(i), lay.x))
        for j in range(s):
            edges.append((lay.a(i), lay.x_ij(i, j)))
            edges.append((lay.x_ij(i, j), lay.c(j)))
    for j in range(s):
        edges.append((lay.x, lay.c(j)))
        edges.append((lay.c(j), lay.top))
    labels = ["0"] + [f"a{i+1}" for i in range(r)] + ["x"]
    labels += [f"x{i+1},{j+1}" for i in range(r) for j in range(s)]
    labels += [f"c{j+1}" for j in range(s)] + ["1"]
    return Lattice(build_poset(edges, lay.size, labels))


def gen_glued(n: int, m: int) -> DistributiveLattice:
    """B(n) and B(m) glued along an edge: the coatom [n]-{1} < [n] of B(n)
    becomes the edge {} < {1} of B(m).  Levels n-1 and n have sizes n and m.

    B(n) keeps indices 0..2^n - 1 (the subset masks); the remaining B(m)
    elements follow in increasing mask order.
    """
    if n < 2 or m < 2:
        raise ParamTooSmall("glued lattice needs n, m >= 2")
    if n + m > 12:
        raise SizeLimit("glued lattice supports n + m <= 12")
    base = 1 << n
    coatom, top_n = (base - 1) ^ 1, base - 1
    index = {0: coatom, 1: top_n}
    for ym in range(2, 1 << m):
        index[ym] = base + ym - 2
    size = base + (1 << m) - 2
    edges = [(x, x | 1 << i) for x in range(base) for i in range(n) if not x >> i & 1]
    edges += [
        (index[y], index[y | 1 << i])
        for y in range(1 << m)
        for i in range(m)
        if not y >> i & 1 and (y, y | 1 << i) != (0, 1)
    ]
    L = Lattice(build_poset(edges, size))
    cert = distributivity_certificate(L)
    if cert is None:
        raise InternalConsistencyError(f"glued({n}, {m}) failed the distributivity check")
    return DistributiveLattice(L.poset, L.join, L.meet, certificate=cert)


def glued_levels(n: int, m: int) -> tuple[int, int]:
    """Rank indices of the distinguished consecutive levels of gen_glued(n, m)."""
    return n - 1, n


# --- posets from the notes -------------------------------------------------


def note1_poset() -> Poset:
    """x < y, x < z."""
    return build_poset([(0, 1), (0, 2)], 3, labels=("x", "y", "z"))


def note3_poset() -> Poset:
    """a1 < b2, b1 < b2, b1 < a2 (indices a1=0, b1=1, b2=2, a2=3)."""
    return build_poset([(0, 2), (1, 2), (1, 3)], 4, labels=("a1", "b1", "b2", "a2"))


def note4_poset() -> Poset:
    """Two disjoint 2-chains a1 < b2 and b1 < a2 (indices a1=0, b1=1, b2=2, a2=3)."""
    return build_poset([(0, 2), (1, 3)], 4, labels=("a1", "b1", "b2", "a2"))


# --- isomorphism classes ---------------------------------------------------


def _refined_colors(P: Poset) -> list[int]:
    """Colour refinement on strict up/down neighbourhoods; isomorphism invariant."""
    n = P.n
    down = [list(iter_bits(P.down[x] & ~(1 << x))) for x in range(n)]
    up = [list(iter_bits(P.up[x] & ~(1 << x))) for x in range(n)]

    def rank(sig):
        table = {s: i for i, s in enumerate(sorted(set(sig)))}
        return [table[s] for s in sig]

    colors = rank([(len(down[x]), len(up[x])) for x in range(n)])
    while True:
        new = rank([
            (colors[x], tuple(sorted(colors[y] for y in down[x])), tuple(sorted(colors[y] for y in up[x])))
            for x in range(n)
        ])
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(P: Poset) -> bytes:
    """Lexicographically smallest relation matrix over colour-respecting relabelings."""
    n = P.n
    if n == 0:
        return b""
    colors = _refined_colors(P)
    cells = [[x for x in range(n) if colors[x] == c] for c in sorted(set(colors))]
    count = prod(factorial(len(c)) for c in cells)
    perms = np.empty((count, n), dtype=np.intp)
    for row, choice in enumerate(itertools.product(*[itertools.permutations(c) for c in cells])):
        perms[row] = [x for part in choice for x in part]
    mats = P.leq[perms[:, :, None], perms[:, None, :]].reshape(count, n * n)
    packed = np.packbits(mats, axis=1)
    best = min(range(count), key=lambda i: packed[i].tobytes())
    return n.to_bytes(2, "little") + packed[best].tobytes()


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return P.n == Q.n and canonical_form(P) == canonical_form(Q)


def _natural_relabel(P: Poset) -> Poset:
    """Relabel along the smallest-index linear extension so i < j whenever x_i < x_j."""
    order = P.linear_extension
    return Poset(P.leq[np.ix_(order, order)], check=False)


@lru_cache(maxsize=None)
def posets_of_size(n: int) -> tuple[Poset, ...]:
    """One naturally labelled representative per isomorphism class of n-element posets."""
    if n > MAX_ALL_POSETS_N:
        raise SizeLimit(f"exhaustive poset corpus supported up to n = {MAX_ALL_POSETS_N}")
    if n <= 0:
        return (Poset(np.zeros((0, 0), dtype=bool), check=False),) if n == 0 else ()
    found: dict[bytes, Poset] = {}
    for Q in posets_of_size(n - 1):
        # every n-poset is some (n-1)-poset plus a new maximal element whose
        # strict downset is an ideal of it
        for ideal in ideal_masks(Q):
            leq = np.zeros((n, n), dtype=bool)
            leq[: n - 1, : n - 1] = Q.leq
            leq[n - 1, n - 1] = True
            for x in iter_bits(ideal):
                leq[x, n - 1] = True
            P = Poset(leq, check=False)
            key = canonical_form(P)
            if key not in found:
                found[key] = P
    reps = [_natural_relabel(found[k]) for k in sorted(found)]
    return tuple(reps)


def gen_all_posets(max_n: int):
    """Stream every poset with 1..max_n elements up to isomorphism, smallest first."""
    if max_n > MAX_ALL_POSETS_N:
        raise SizeLimit(f"exhaustive poset corpus supported up to n = {MAX_ALL_POSETS_N}")
    for n in range(1, max_n + 1):
        yield from posets_of_size(n)


def gen_random_poset(n: int, density: float, seed=None) -> Poset:
    """Closure of a random DAG: each pair i < j gets an edge with probability ``density``."""
    if n > 40:
        raise SizeLimit("random posets are limited to 40 elements")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < density, k=1)
    edges = list(zip(*map(np.ndarray.tolist, np.nonzero(upper))))
    return build_poset(edges, n)


# --- dispatch for the command line -----------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple[int, ...] = ()
    seed: int | None = None
    density: float = 0.3
    extra: dict = field(default_factory=dict)

    KINDS = ("boolean", "chain_product", "frankl", "figure1", "glued", "random_poset", "all_posets")

    def generate(self):
        """Returns (poset-or-lattice, metadata dict)."""
        k, p = self.kind, self.params
        if k == "boolean":
            (n,) = p
            return gen_boolean(n), {}
        if k == "chain_product":
            return gen_chain_product(p), {}
        if k == "frankl":
            r, s = p
            D, X, Y = gen_frankl(r, s)
            return D, {"A": sorted(X), "B": sorted(Y)}
        if k == "figure1":
            r, s = p
            L = gen_figure1(r, s)
            return L, {"A": sorted(L.atoms), "B": sorted(L.coatoms), "levels": [1, 3]}
        if k == "glued":
            n, m = p
            j, kk = glued_levels(n, m)
            D = gen_glued(n, m)
            return D, {"levels": [j, kk], "A": sorted(D.level(j)), "B": sorted(D.level(kk))}
        if k == "random_poset":
            (n,) = p
            return gen_random_poset(n, self.density, self.seed), {"seed": self.seed, "density": self.density}
        if k == "all_posets":
            (n,) = p
            return list(gen_all_posets(n)), {"max_n": n}
        raise ValueError(f"unknown family kind {k!r}; choose from {', '.join(self.KINDS)}")
