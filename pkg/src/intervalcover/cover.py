"""Minimum covers of convex spans ``[A, B]`` by intervals ``[a, b]``.

The exact solver is a branch and bound over candidate intervals.  It
branches on the uncovered element contained in the fewest remaining
candidates and prunes with a packing bound: uncovered elements whose
candidate sets are pairwise disjoint each need their own interval.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable

from .errors import Infeasible
from .poset import ConvexSpan, Poset, convex_span, from_mask, iter_bits, rank_profile

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Interval:
    a: int
    b: int

    def elements(self, host: Poset) -> frozenset[int]:
        return host.interval(self.a, self.b)


@dataclass
class IntervalCover:
    """A family of intervals meant to cover ``span``.

    ``optimal`` is True when the size is proven minimum (by search, or
    because it meets the max(|A|, |B|) lower bound).
    """

    span: ConvexSpan
    intervals: tuple[Interval, ...]
    optimal: bool = False
    trace: dict = field(default_factory=dict)

    def __post_init__(self):
        self.intervals = tuple(self.intervals)
        if not self.optimal and self.size == lower_bound(self.span):
            self.optimal = True

    @property
    def host(self) -> Poset:
        return self.span.host

    @property
    def size(self) -> int:
        return len(self.intervals)

    def __len__(self) -> int:
        return self.size

    def union_mask(self) -> int:
        m = 0
        for iv in self.intervals:
            m |= self.host.interval_mask(iv.a, iv.b)
        return m

    def union(self) -> frozenset[int]:
        return from_mask(self.union_mask())

    def is_valid(self) -> bool:
        """Union equals the span and every interval is a proper [a, b], a in A, b in B."""
        P = self.host
        for iv in self.intervals:
            if iv.a not in self.span.lower or iv.b not in self.span.upper or not P.le(iv.a, iv.b):
                return False
        return self.union_mask() == self.span.mask

    def to_dict(self) -> dict:
        return {
            "rho": self.size,
            "optimal": bool(self.optimal),
            "intervals": [{"a": int(iv.a), "b": int(iv.b)} for iv in self.intervals],
            "span_size": len(self.span),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def lower_bound(span: ConvexSpan) -> int:
    return max(len(span.lower), len(span.upper))


@dataclass(frozen=True)
class CoverInstance:
    span: ConvexSpan
    candidates: tuple[Interval, ...]

    @property
    def host(self) -> Poset:
        return self.span.host


def candidate_intervals(span: ConvexSpan) -> CoverInstance:
    """Every interval [a, b] with a in A, b in B and a <= b, sorted by (a, b)."""
    P = span.host
    cands = tuple(
        Interval(a, b) for a in sorted(span.lower) for b in sorted(span.upper) if P.le(a, b)
    )
    return CoverInstance(span, cands)


def instance(P: Poset, A: Iterable[int], B: Iterable[int]) -> CoverInstance:
    return candidate_intervals(convex_span(P, A, B))


class _Tables:
    """Bitset views of an instance: element -> candidates and candidate -> elements."""

    def __init__(self, inst: CoverInstance):
        P = inst.host
        self.inst = inst
        self.cand_elems = [P.interval_mask(c.a, c.b) for c in inst.candidates]
        self.span = inst.span.mask
        self.elem_cands = {}
        for x in iter_bits(self.span):
            m = 0
            for i, em in enumerate(self.cand_elems):
                if em >> x & 1:
                    m |= 1 << i
            if m == 0:
                raise Infeasible(f"span element {x} lies in no candidate interval")
            self.elem_cands[x] = m
        self.lower = sorted(inst.span.lower)
        self.upper = sorted(inst.span.upper)


def _greedy(tables: _Tables, uncovered: int, allowed: int) -> list[int] | None:
    chosen = []
    while uncovered:
        best, best_gain = -1, 0
        for i in iter_bits(allowed):
            gain = (tables.cand_elems[i] & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = i, gain
        if best < 0:
            return None
        chosen.append(best)
        uncovered &= ~tables.cand_elems[best]
        allowed &= ~(1 << best)
    return chosen


def greedy_cover(inst: CoverInstance) -> IntervalCover:
    """Largest-gain greedy cover; ties go to the smallest candidate index."""
    tables = _Tables(inst)
    chosen = _greedy(tables, tables.span, (1 << len(inst.candidates)) - 1)
    return IntervalCover(inst.span, sorted(inst.candidates[i] for i in chosen), trace={"method": "greedy"})


def _packing_bound(tables: _Tables, uncovered: int, allowed: int) -> int:
    """Size of a greedy set of uncovered elements with pairwise disjoint candidate sets."""
    items = sorted(
        ((tables.elem_cands[x] & allowed).bit_count(), x) for x in iter_bits(uncovered)
    )
    used = 0
    count = 0
    for _, x in items:
        cs = tables.elem_cands[x] & allowed
        if cs & used == 0:
            used |= cs
            count += 1
    return count


def exact_min_cover(inst: CoverInstance, budget: int | None = None) -> IntervalCover:
    """Provably minimum cover of ``inst.span`` by candidate intervals.

    ``budget`` caps the number of search nodes.  When it is exhausted the
    best cover found so far is returned with ``optimal=False``.
    """
    tables = _Tables(inst)
    ncand = len(inst.candidates)
    all_cands = (1 << ncand) - 1

    incumbent = _greedy(tables, tables.span, all_cands)
    best = [sorted(incumbent)]
    root_bound = max(lower_bound(inst.span), _packing_bound(tables, tables.span, all_cands))
    nodes = 0
    exhausted = False

    def search(uncovered: int, allowed: int, chosen: list[int]) -> None:
        nonlocal nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if budget is not None and nodes > budget:
            exhausted = True
            return
        if not uncovered:
            if len(chosen) < len(best[0]):
                best[0] = sorted(chosen)
            return
        if len(chosen) + 1 >= len(best[0]):
            return
        # branch element: fewest allowed candidates, smallest index on ties
        pick, pick_opts = -1, None
        for x in iter_bits(uncovered):
            opts = tables.elem_cands[x] & allowed
            if opts == 0:
                return
            if pick_opts is None or opts.bit_count() < pick_opts.bit_count():
                pick, pick_opts = x, opts
        if len(chosen) + _packing_bound(tables, uncovered, allowed) >= len(best[0]):
            return
        order = sorted(
            iter_bits(pick_opts),
            key=lambda i: (-(tables.cand_elems[i] & uncovered).bit_count(), i),
        )
        for i in order:
            chosen.append(i)
            search(uncovered & ~tables.cand_elems[i], allowed & ~(1 << i), chosen)
            chosen.pop()
            # later branches may not reuse this candidate: it was tried already
            allowed &= ~(1 << i)
            if exhausted:
                return

    if len(best[0]) > root_bound:
        search(tables.span, all_cands, [])
    optimal = not exhausted
    if exhausted:
        log.warning("node budget %s exhausted; returning best cover found (size %d)", budget, len(best[0]))
    cover = IntervalCover(
        inst.span,
        [inst.candidates[i] for i in best[0]],
        optimal=optimal,
        trace={"method": "branch-and-bound", "nodes": nodes, "root_bound": root_bound},
    )
    return cover


def brute_force_min_cover(inst: CoverInstance) -> int:
    """Reference oracle: smallest k such that some k candidates cover the span."""
    from itertools import combinations

    masks = [inst.host.interval_mask(c.a, c.b) for c in inst.candidates]
    target = inst.span.mask
    for k in range(len(masks) + 1):
        for combo in combinations(masks, k):
            u = 0
            for m in combo:
                u |= m
            if u == target:
                return k
    raise Infeasible("candidates do not cover the span")


@dataclass
class ICPReport:
    holds: bool
    rho: int
    bound: int
    pairs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "rho": self.rho, "bound": self.bound, "pairs": self.pairs}


def slab_span(P: Poset, j: int, k: int) -> ConvexSpan:
    """The slab P_{j,k} (levels j..k) as a convex span of its minimal and maximal elements."""
    prof = rank_profile(P)
    if not 0 <= j <= k <= prof.height:
        raise ValueError(f"levels must satisfy 0 <= j <= k <= {prof.height}")
    slab = prof.slab(j, k)
    return convex_span(P, P.minimal(slab), P.maximal(slab))


def icp_check(P: Poset, j: int = 0, k: int = 0, strong: bool = False, budget: int | None = None) -> ICPReport:
    """Does rho(P_{j,k}) equal max(r_j, r_k)?  With ``strong``, over all j <= k.

    For a strong check the reported rho/bound belong to the first failing
    pair, or to the full slab (0, r(P)) when every pair holds.
    """
    sizes = rank_profile(P).level_sizes  # NotRanked propagates
    top = len(sizes) - 1
    pairs = [(a, b) for a in range(top + 1) for b in range(a, top + 1)] if strong else [(j, k)]
    details = []
    failed = None
    for a, b in pairs:
        bound = max(sizes[a], sizes[b])
        cover = exact_min_cover(candidate_intervals(slab_span(P, a, b)), budget=budget)
        ok = cover.size == bound
        details.append({"j": a, "k": b, "rho": cover.size, "bound": bound, "holds": ok, "optimal": cover.optimal})
        if not ok and failed is None:
            failed = details[-1]
    pick = failed or details[-1]
    return ICPReport(failed is None, pick["rho"], pick["bound"], details)


__all__ = [
    "Interval",
    "IntervalCover",
    "CoverInstance",
    "ICPReport",
    "candidate_intervals",
    "instance",
    "exact_min_cover",
    "greedy_cover",
    "brute_force_min_cover",
    "icp_check",
    "slab_span",
    "lower_bound",
]
