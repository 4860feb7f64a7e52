"""Constructive interval covers.

* :func:`build_surjection` turns the minimal-counterexample argument for
  onto maps ``f: B -> A`` into an algorithm: restrict to A u B, peel
  isolated points, thin every component down to a star, then assign
  cyclically across stars.
* :func:`cover_from_surjection` converts such a map into |B| intervals of
  O(P); :func:`atoms_coatoms_cover` chains everything together to cover
  D - {0, 1} for any finite distributive lattice.
* :func:`two_level_cover` and :func:`thm4_cover` handle pairs of levels
  with a two-element side, and the general |A||B| - min(|A|, |B|) bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .birkhoff import (
    BirkhoffMaps,
    DistributiveLattice,
    Lattice,
    distributivity_certificate,
    dual_lattice,
    ideals_lattice,
    reconstruct_poset,
)
from .cover import Interval, IntervalCover
from .errors import (
    InternalConsistencyError,
    LevelSizeMismatch,
    NotAntichain,
    NotDistributive,
    NotDominated,
    NotLevels,
    PreconditionViolated,
    SizeOrder,
    SurjectionInvalid,
    TooSmall,
)
from .poset import Poset, antichain_relations, convex_span, ideal_masks, iter_bits, to_mask


@dataclass
class Star:
    center: int
    leaves: tuple[int, ...]
    a: int
    b: int


@dataclass
class StarForest:
    stars: list[Star]

    def elements(self) -> set[int]:
        return {x for s in self.stars for x in (s.center, *s.leaves)}


@dataclass
class Surjection:
    """An onto map f: B -> A, plus a record of how it was built."""

    domain: frozenset[int]
    codomain: frozenset[int]
    map: dict[int, int]
    trace: dict = field(default_factory=dict)

    def __call__(self, b: int) -> int:
        return self.map[b]

    def is_onto(self) -> bool:
        return set(self.map) == set(self.domain) and set(self.map.values()) == set(self.codomain)

    def to_dict(self) -> dict:
        return {"map": {str(b): a for b, a in sorted(self.map.items())}, "trace": self.trace}


def _check_pair(P: Poset, A, B) -> tuple[frozenset[int], frozenset[int]]:
    A, B = P.check_elements(A), P.check_elements(B)
    if not A or not B:
        raise PreconditionViolated("A and B must be nonempty")
    for name, S in (("A", A), ("B", B)):
        if not P.is_antichain(S):
            raise NotAntichain(f"{name} is not an antichain")
    return A, B


def build_surjection(P: Poset, A: Iterable[int], B: Iterable[int]) -> Surjection:
    """Onto f: B -> A such that every ideal X meeting A and missing part of B
    contains f(b) for some b in B - X.

    Needs antichains A <= B with |A| <= |B|.
    """
    A, B = _check_pair(P, A, B)
    if len(A) > len(B):
        raise SizeOrder(f"|A| = {len(A)} exceeds |B| = {len(B)}")
    if not antichain_relations(P, A, B).le:
        raise NotDominated("build_surjection needs A <= B")
    # only the comparabilities between A and B matter
    relation = {(a, b) for a in A for b in B if a != b and P.le(a, b)}
    trace = {"restricted_to": sorted(A | B), "peeled": [], "deletions": [], "stars": [], "completion": []}
    f = _solve(A, B, relation, trace)
    return Surjection(B, A, f, trace)


def _solve(A: frozenset[int], B: frozenset[int], relation: set, trace: dict) -> dict[int, int]:
    if len(A) == 1:
        (a,) = A
        return {b: a for b in B}
    # points of A & B are exactly the isolated ones once restricted to A u B
    isolated = sorted(A & B)
    if isolated:
        c = isolated[0]
        f = _solve(A - {c}, B - {c}, relation, trace)
        a = min(A - {c})
        b0 = min(b for b, v in f.items() if v == a)
        g = dict(f)
        g[b0] = c
        g[c] = a
        trace["peeled"].append({"c": c, "a": a, "b0": b0})
        return g
    return _cyclic_on_stars(A, B, relation, trace)


def reduce_to_stars(A: frozenset[int], B: frozenset[int], relation: set, deletions: list | None = None) -> StarForest:
    """Delete middle relations of 4-element paths a < b > c < d until every
    component is a star.  Each deletion lowers the comparability count."""
    rel = {(a, b) for a, b in relation if a in A and b in B}
    while True:
        deg = {}
        for a, b in rel:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        middle = sorted((b, c) for c, b in rel if deg[c] >= 2 and deg[b] >= 2)
        if not middle:
            break
        b, c = middle[0]
        a = min(x for x, y in rel if y == b and x != c)
        d = min(y for x, y in rel if x == c and y != b)
        rel.discard((c, b))
        if deletions is not None:
            deletions.append({"a": a, "b": b, "c": c, "d": d})

    deg = {}
    for a, b in rel:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    # every edge now touches at most one vertex of degree >= 2: the centre
    groups: dict[int, list[int]] = {}
    pairs = []
    for a, b in sorted(rel):
        if deg[a] >= 2:
            groups.setdefault(a, []).append(b)
        elif deg[b] >= 2:
            groups.setdefault(b, []).append(a)
        else:
            pairs.append((a, b))
    stars = [Star(center=a, leaves=(b,), a=a, b=b) for a, b in pairs]
    for centre, leaves in groups.items():
        leaves = tuple(sorted(leaves))
        if centre in A:
            stars.append(Star(center=centre, leaves=leaves, a=centre, b=leaves[0]))
        else:
            stars.append(Star(center=centre, leaves=leaves, a=leaves[0], b=centre))
    forest = StarForest(sorted(stars, key=lambda s: min(s.center, *s.leaves)))
    if forest.elements() != set(A | B):
        raise InternalConsistencyError("star reduction lost elements")
    return forest


def _cyclic_on_stars(A, B, relation, trace) -> dict[int, int]:
    forest = reduce_to_stars(A, B, relation, trace["deletions"])
    stars = forest.stars
    n = len(stars)
    f = {}
    for i, s in enumerate(stars):
        f[s.b] = stars[(i + 1) % n].a
    trace["stars"].append(
        [{"center": s.center, "leaves": list(s.leaves), "a": s.a, "b": s.b} for s in stars]
    )
    hit = set(f.values())
    unassigned = sorted(B - set(f))
    unhit = sorted(A - hit)
    for b, a in zip(unassigned, unhit):
        f[b] = a
        trace["completion"].append({"b": b, "a": a})
    fallback = min(A)
    for b in unassigned[len(unhit) :]:
        f[b] = fallback
        trace["completion"].append({"b": b, "a": fallback})
    return f


def _as_map(f) -> Mapping[int, int]:
    return f.map if isinstance(f, Surjection) else f


def surjection_failure(P: Poset, A: Iterable[int], B: Iterable[int], f) -> int | None:
    """First ideal (bitset) violating the surjection property, or None."""
    f = _as_map(f)
    a_mask, b_mask = to_mask(A), to_mask(B)
    for X in ideal_masks(P):
        if X & a_mask and b_mask & ~X:
            if not any(not X >> b & 1 and X >> f[b] & 1 for b in iter_bits(b_mask)):
                return X
    return None


def verify_surjection(P: Poset, A: Iterable[int], B: Iterable[int], f) -> bool:
    """For every ideal X with A & X nonempty and B not inside X, some b in
    B - X has f(b) in X.  Exhaustive over all ideals of P."""
    return surjection_failure(P, A, B, f) is None


def onto_maps(A: Iterable[int], B: Iterable[int]):
    """Every onto map B -> A as a dict (brute force)."""
    A, B = sorted(A), sorted(B)
    for values in itertools.product(A, repeat=len(B)):
        if set(values) == set(A):
            yield dict(zip(B, values))


def valid_surjections(P: Poset, A, B) -> list[dict[int, int]]:
    return [f for f in onto_maps(A, B) if verify_surjection(P, A, B, f)]


def cover_from_surjection(M: BirkhoffMaps, A: Iterable[int], B: Iterable[int], f) -> IntervalCover:
    """The |B| intervals [bold(f(b)), bar(b)] of O(P); they cover [bold(A), bar(B)]."""
    P = M.source
    A, B = P.check_elements(A), P.check_elements(B)
    if not antichain_relations(P, A, B).not_ge:
        raise PreconditionViolated("cover_from_surjection needs A not>= B")
    fmap = _as_map(f)
    if set(fmap) != set(B) or not set(fmap.values()) <= set(A):
        raise SurjectionInvalid("f must map B into A")
    if not verify_surjection(P, A, B, fmap):
        raise SurjectionInvalid("f fails the ideal condition")
    D = M.lattice
    span = convex_span(D.poset, {M.bold[a] for a in A}, {M.bar[b] for b in B})
    intervals = [Interval(M.bold[fmap[b]], M.bar[b]) for b in sorted(B)]
    return IntervalCover(span, intervals, trace={"method": "surjection", "map": dict(sorted(fmap.items()))})


def _require_distributive(D: Lattice) -> None:
    if not isinstance(D, DistributiveLattice) and distributivity_certificate(D) is None:
        raise NotDistributive("a distributive lattice is required")


def join_irreducible_cover(D: Lattice, calA: Iterable[int], calB: Iterable[int]) -> IntervalCover:
    """Cover [calA, bar(calB)] by |calB| intervals [a, bar(b)].

    calA, calB are antichains of join-irreducibles of D with calA <= calB
    and |calA| <= |calB|; bar(b) is the largest element of D not above b.
    A one-element calA is the degenerate case: every [a, bar(b)] is used
    and the trace is flagged.
    """
    _require_distributive(D)
    J = reconstruct_poset(D)
    pos = {lab: i for i, lab in enumerate(J.labels)}
    try:
        A = frozenset(pos[x] for x in calA)
        B = frozenset(pos[x] for x in calB)
    except KeyError as exc:
        raise PreconditionViolated(f"element {exc.args[0]} is not join-irreducible") from None
    A, B = _check_pair(J, A, B)
    if len(A) > len(B):
        raise SizeOrder("need |calA| <= |calB|")
    if not antichain_relations(J, A, B).le:
        raise NotDominated("need calA <= calB")

    O, M = ideals_lattice(J)

    def to_D(o: int) -> int:
        return D.join_of(J.labels[x] for x in iter_bits(O.ideal_of[o]))

    if len(A) == 1:
        (a,) = A
        if not antichain_relations(J, A, B).not_ge:
            raise NotDominated("with |calA| = 1 the hull [calA, bar(calB)] is undefined here")
        fmap = {b: a for b in B}
        inner = cover_from_surjection(M, A, B, fmap)
        degenerate = True
    else:
        surj = build_surjection(J, A, B)
        inner = cover_from_surjection(M, A, B, surj)
        fmap = surj.map
        degenerate = False

    lower = {to_D(M.bold[a]) for a in A}
    upper = {to_D(M.bar[b]) for b in B}
    span = convex_span(D.poset, lower, upper)
    intervals = [Interval(to_D(iv.a), to_D(iv.b)) for iv in inner.intervals]
    cover = IntervalCover(
        span,
        intervals,
        trace={
            "method": "join-irreducible-surjection",
            "degenerate": degenerate,
            "map": {int(J.labels[b]): int(J.labels[a]) for b, a in sorted(fmap.items())},
            "surjection": surj.trace if not degenerate else None,
        },
    )
    if not cover.is_valid():
        raise InternalConsistencyError("surjection cover does not cover its span")
    return cover


def _flip(cover: IntervalCover, D: Lattice, lower, upper) -> IntervalCover:
    """Map a cover computed in the dual lattice back to D."""
    span = convex_span(D.poset, lower, upper)
    return IntervalCover(
        span,
        sorted(Interval(iv.b, iv.a) for iv in cover.intervals),
        optimal=cover.optimal,
        trace={**cover.trace, "dualized": True},
    )


def atoms_coatoms_cover(D: Lattice) -> IntervalCover:
    """Cover D - {0, 1} by max(|atoms|, |coatoms|) intervals [atom, coatom]."""
    if D.n < 3:
        raise TooSmall("need |D| >= 3")
    _require_distributive(D)
    atoms, coatoms = D.atoms, D.coatoms
    span = convex_span(D.poset, atoms, coatoms)
    if len(atoms) == 1 or len(coatoms) == 1:
        if len(atoms) == 1:
            (alpha,) = atoms
            intervals = [Interval(alpha, c) for c in sorted(coatoms)]
        else:
            (gamma,) = coatoms
            intervals = [Interval(a, gamma) for a in sorted(atoms)]
        return IntervalCover(span, intervals, trace={"method": "trivial"})
    if len(atoms) > len(coatoms):
        Dd = dual_lattice(D)
        return _flip(atoms_coatoms_cover(Dd), D, atoms, coatoms)
    J = reconstruct_poset(D)
    maximal_ji = [J.labels[x] for x in sorted(J.maximal())]
    inner = join_irreducible_cover(D, atoms, maximal_ji)
    cover = IntervalCover(span, sorted(inner.intervals), trace=inner.trace)
    if not cover.is_valid() or cover.size != max(len(atoms), len(coatoms)):
        raise InternalConsistencyError("atoms/coatoms cover failed its guarantee")
    return cover


def _levels(D: Lattice, j: int, k: int):
    levels = D.ranks.levels
    if not (0 <= j < len(levels) and 0 <= k < len(levels)) or j == k:
        raise NotLevels(f"need two distinct levels in 0..{len(levels) - 1}, got {j} and {k}")
    if j > k:
        raise NotDominated(f"level {j} lies above level {k}")
    A, B = levels[j], levels[k]
    if not antichain_relations(D.poset, A, B).le:
        raise NotDominated("levels do not satisfy A <= B")
    return A, B


def _covers(W: Lattice, span_mask: int, pairs) -> bool:
    u = 0
    for a, b in pairs:
        u |= W.poset.interval_mask(a, b)
    return u == span_mask


def two_level_cover(D: Lattice, j: int, k: int) -> IntervalCover:
    """Cover [A, B] for levels A = L_j, B = L_k with min(|A|, |B|) = 2 by
    max(|A|, |B|) intervals."""
    _require_distributive(D)
    A, B = _levels(D, j, k)
    if min(len(A), len(B)) != 2:
        raise LevelSizeMismatch(f"level sizes are {len(A)} and {len(B)}; the smaller must be 2")
    dualized = len(A) != 2
    W = dual_lattice(D) if dualized else D
    lower, upper = (B, A) if dualized else (A, B)
    P = W.poset
    span_mask = convex_span(P, lower, upper).mask
    x, y = sorted(lower)
    bottom = int(W.meet[x, y])
    trace = {"method": "two-level", "dualized": dualized, "meet": bottom, "restricted_size": P.up[bottom].bit_count()}

    pairs = None
    for a, b in ((x, y), (y, x)):
        above = [u for u in sorted(upper) if P.le(a, u)]
        rest = [u for u in sorted(upper) if not P.le(a, u)]
        if rest:
            pairs = [(a, u) for u in above] + [(b, u) for u in rest]
            trace.update(branch="split", a=a, b=b, k=len(above))
            break
    if pairs is None:
        # complete bipartite between {a, b} and B: one of F_1..F_n works
        a, b = x, y
        bs = sorted(upper)
        for i in range(len(bs)):
            cand = [(b if t == i else a, u) for t, u in enumerate(bs)]
            if _covers(W, span_mask, cand):
                pairs = cand
                trace.update(branch="families", a=a, b=b, family=i + 1)
                break
        else:
            raise InternalConsistencyError("no family F_i covers [A, B]")
    elif not _covers(W, span_mask, pairs):
        raise InternalConsistencyError("split assignment does not cover [A, B]")

    intervals = [Interval(v, u) if dualized else Interval(u, v) for u, v in pairs]
    cover = IntervalCover(convex_span(D.poset, A, B), sorted(intervals), trace=trace)
    return cover


# choices of (b_1..b_t) tried before falling back to every valid interval
MAX_RELABELLINGS = 40320


def thm4_params(m: int, n: int) -> tuple[int, int]:
    """(s, t) for sides m <= n."""
    if m < n:
        return m, m + 1
    s = m if m % 2 == 0 else m - 1
    return s, s


def thm4_bound(m: int, n: int) -> int:
    lo = min(m, n)
    return m * n - lo + (1 if m == n and m % 2 == 1 else 0)


def thm4_cover(D: Lattice, j: int, k: int) -> IntervalCover:
    """Cover [A, B] by at most |A||B| - min(|A|, |B|) intervals (+1 when the
    sides are equal and odd), taking the first covering family S_0, S_1, ..."""
    _require_distributive(D)
    A, B = _levels(D, j, k)
    if len(A) < 2 or len(B) < 2:
        raise LevelSizeMismatch("both levels need more than one element")
    dualized = len(A) > len(B)
    W = dual_lattice(D) if dualized else D
    lower, upper = (B, A) if dualized else (A, B)
    P = W.poset
    a, b = sorted(lower), sorted(upper)
    m, n = len(a), len(b)
    s, t = thm4_params(m, n)
    span_mask = convex_span(P, lower, upper).mask
    bound = thm4_bound(len(A), len(B))
    found = None
    # index labelling first; an element of A u B inside a single valid
    # interval can defeat it, so other choices of b_1..b_t are tried next
    prefixes = itertools.islice(itertools.permutations(range(n), t), MAX_RELABELLINGS)
    for relabel, prefix in enumerate(prefixes):
        bb = [b[q] for q in prefix] + [b[q] for q in range(n) if q not in prefix]
        valid = [(i, q) for i in range(m) for q in range(n) if P.le(a[i], bb[q])]
        for fam in range(t):
            missing = {(i, (i + fam) % t) for i in range(s)}
            pairs = [(a[i], bb[q]) for i, q in valid if (i, q) not in missing]
            if _covers(W, span_mask, pairs):
                found = relabel, fam, sorted([a[i], bb[q]] for i, q in missing)
                break
        if found:
            break
    if found is None:
        pairs = [(x, y) for x in a for y in b if P.le(x, y)]
        if len(pairs) > bound:
            raise InternalConsistencyError("no family S_k covers [A, B]")
        found = None, None, []
    intervals = [Interval(v, u) if dualized else Interval(u, v) for u, v in pairs]
    trace = {
        "method": "thm4-families",
        "dualized": dualized,
        "s": s,
        "t": t,
        "relabelling": found[0],
        "family": found[1],
        "missing": found[2],
        "fallback": found[1] is None,
        "bound": bound,
    }
    cover = IntervalCover(convex_span(D.poset, A, B), sorted(intervals), trace=trace)
    if cover.size > trace["bound"]:
        raise InternalConsistencyError("family exceeds the guaranteed bound")
    return cover


def unique_configuration_witnesses(D: Lattice, limit: int | None = None) -> list[dict]:
    """Configurations contradicting the unique-configuration lemma.

    Looks for levels L below U with |L| >= 2, a in L and b != c in U, and
    elements x, y with a < x < b, a < y < c, where x is comparable to no
    other element of L u U than a and b (y likewise with a and c).  The
    lemma says this forces L = {a}, so on a distributive lattice the result
    should be empty.
    """
    P = D.poset
    levels = D.ranks.levels
    rank = D.ranks.rank
    found = []
    for l, L in enumerate(levels):
        if len(L) < 2:
            continue
        L_mask = to_mask(L)
        for u in range(l + 2, len(levels)):
            U_mask = to_mask(levels[u])
            both = L_mask | U_mask
            private: dict[int, dict[int, int]] = {}
            for x in range(P.n):
                if not l < rank[x] < u:
                    continue
                comp = (P.down[x] | P.up[x]) & both
                if comp.bit_count() != 2:
                    continue
                lo, hi = comp & L_mask, comp & U_mask
                if lo and hi:
                    a, b = lo.bit_length() - 1, hi.bit_length() - 1
                    private.setdefault(a, {}).setdefault(b, x)
            for a, by_b in sorted(private.items()):
                if len(by_b) >= 2:
                    (b, x), (c, y) = sorted(by_b.items())[:2]
                    found.append({"L": l, "U": u, "a": a, "b": b, "c": c, "x": x, "y": y})
                    if limit is not None and len(found) >= limit:
                        return found
    return found
