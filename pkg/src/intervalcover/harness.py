"""Experiment campaigns: the Daykin-Frankl width conjecture on B(n) and
level-cover audits over the small distributive lattices O(P).

Campaigns never assert the conjectures.  A violation is a result; it is
stored with enough data to replay it (see :func:`replay_violation`).
"""
from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .birkhoff import Lattice, ideals_lattice
from .cover import candidate_intervals, exact_min_cover, greedy_cover
from .errors import PreconditionViolated, SizeLimit
from .families import boolean_poset, posets_of_size
from .poset import (
    Poset,
    antichain_relations,
    antichain_masks,
    convex_span,
    dilworth_width,
    downset_mask,
    format_poset,
    iter_bits,
    parse_poset,
)

MAX_EXHAUSTIVE_DF_N = 4
MAX_SAMPLE_DF_N = 8
MAX_SEARCH_POSET_SIZE = 6
PROBLEMS = ("atoms", "bound", "minimal")


@dataclass
class CampaignReport:
    instances_checked: int
    violations: list
    runtime: float
    mode: str
    seed: int | None = None
    summary: dict = field(default_factory=dict)

    def to_dict(self, include_runtime: bool = False) -> dict:
        d = {
            "instances_checked": self.instances_checked,
            "mode": self.mode,
            "seed": self.seed,
            "summary": self.summary,
            "violations": self.violations,
        }
        if include_runtime:
            d["runtime"] = round(self.runtime, 3)
        return d

    def to_json(self, include_runtime: bool = False) -> str:
        # runtime is left out by default so reports are byte-identical
        return json.dumps(self.to_dict(include_runtime), indent=2, sort_keys=True) + "\n"


# --- Daykin-Frankl: w(C) / |C| >= C(n, n/2) / 2^n for convex C in B(n) -----


def _ratio_ok(w: int, size: int, n: int) -> bool:
    return w * (1 << n) >= comb(n, n // 2) * size


def _boolean_antichains(n: int) -> np.ndarray:
    return np.array(antichain_masks(boolean_poset(n)), dtype=np.int64)


def _exhaustive_df(n: int):
    """Widths and sizes of every nonempty convex subset of B(n), vectorised
    over all 2^(2^n) subsets."""
    P = boolean_poset(n)
    N = 1 << n
    subsets = np.arange(1, 1 << N, dtype=np.int64)
    convex = np.ones(subsets.shape, dtype=bool)
    for x in range(N):
        strict_down = P.down[x] & ~(1 << x)
        strict_up = P.up[x] & ~(1 << x)
        outside = (subsets >> x & 1) == 0
        convex &= ~(outside & (subsets & strict_down != 0) & (subsets & strict_up != 0))
    C = subsets[convex]
    sizes = np.zeros(C.shape, dtype=np.int64)
    for x in range(N):
        sizes += C >> x & 1
    antichains = _boolean_antichains(n)
    ac_sizes = np.array([int(a).bit_count() for a in antichains])
    widths = np.zeros(C.shape, dtype=np.int64)
    for a, k in zip(antichains, ac_sizes):
        inside = (C & a) == a
        widths = np.where(inside & (k > widths), k, widths)
    return C, widths, sizes


def _subset_width(P: Poset, mask: int) -> int:
    Q, _ = P.induced(iter_bits(mask))
    return dilworth_width(Q)


def _sample_df(n: int, count: int, seed):
    """Random convex sets D2 - D1 with D1 inside D2, both downsets."""
    P = boolean_poset(n)
    N = 1 << n
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        gens = rng.random(N) < rng.random()
        d2 = downset_mask(P, sum(1 << int(x) for x in np.nonzero(gens)[0]))
        inner = [x for x in iter_bits(d2) if rng.random() < rng.random()]
        d1 = downset_mask(P, sum(1 << x for x in inner))
        c = d2 & ~d1
        if c:
            out.append(c)
    return out


def check_daykin_frankl(n: int, mode: str = "exhaustive", sample_count: int = 1000, seed: int | None = 0) -> CampaignReport:
    """Check w(C)/|C| >= C(n, floor(n/2))/2^n over convex subsets C of B(n)."""
    t0 = time.perf_counter()
    if mode == "exhaustive":
        if not 1 <= n <= MAX_EXHAUSTIVE_DF_N:
            raise SizeLimit(f"exhaustive mode needs 1 <= n <= {MAX_EXHAUSTIVE_DF_N}")
        C, widths, sizes = _exhaustive_df(n)
        items = zip(C.tolist(), widths.tolist(), sizes.tolist())
        seed = None
    elif mode == "sample":
        if not 1 <= n <= MAX_SAMPLE_DF_N:
            raise SizeLimit(f"sample mode needs 1 <= n <= {MAX_SAMPLE_DF_N}")
        P = boolean_poset(n)
        masks = _sample_df(n, sample_count, seed)
        items = ((c, _subset_width(P, c), c.bit_count()) for c in masks)
    else:
        raise PreconditionViolated(f"unknown mode {mode!r}")

    threshold = Fraction(comb(n, n // 2), 1 << n)
    checked, violations = 0, []
    best = None
    for c, w, size in items:
        checked += 1
        r = Fraction(w, size)
        if best is None or r < best[0] or (r == best[0] and size > best[2]):
            best = (r, c, size)
        if not _ratio_ok(w, size, n):
            violations.append({"instance": hex(c), "width": w, "size": size, "ratio": str(r), "expected": str(threshold)})
    full = (1 << (1 << n)) - 1
    summary = {
        "n": n,
        "threshold": str(threshold),
        "min_ratio": str(best[0]),
        "min_ratio_instance": hex(best[1]),
        "min_ratio_is_full_lattice": best[1] == full,
    }
    if mode == "sample":
        summary["sampler"] = "difference of random downsets D2 - D1; biased toward large sets"
    return CampaignReport(checked, violations, time.perf_counter() - t0, mode, seed, summary)


# --- level-cover searches ----------------------------------------------------


def _level_pairs(D: Lattice, problem: str):
    levels = D.ranks.levels
    P = D.poset
    if problem == "atoms":
        pairs = [(1, k) for k in range(2, len(levels))] if len(levels) > 2 else []
    else:
        pairs = list(itertools.combinations(range(len(levels)), 2))
    for j, k in pairs:
        A, B = levels[j], levels[k]
        if problem == "bound" and (len(A) < 2 or len(B) < 2):
            continue
        if antichain_relations(P, A, B).le:
            yield j, k, A, B


def _expected(problem: str, A, B) -> int:
    if problem == "bound":
        return len(A) + len(B) - 2
    return max(len(A), len(B))


def _solve_pair(D: Lattice, A, B, budget):
    """(rho, optimal flag); exact search only when greedy misses max(|A|, |B|)."""
    inst = candidate_intervals(convex_span(D.poset, A, B))
    g = greedy_cover(inst)
    if g.size == max(len(A), len(B)):
        return g.size, True
    c = exact_min_cover(inst, budget=budget)
    return c.size, c.optimal


def _check_lattice(args):
    ident, kind, text, D, problem, budget = args
    if D is None:
        D, _ = ideals_lattice(parse_poset(text))
    out, ratios, unresolved, checked = [], [], [], 0
    for j, k, A, B in _level_pairs(D, problem):
        checked += 1
        rho, optimal = _solve_pair(D, A, B, budget)
        expected = _expected(problem, A, B)
        ratios.append(rho / max(len(A), len(B)))
        bad = rho > expected if problem == "bound" else rho != expected
        if bad:
            rec = {
                "instance": ident,
                "levels": [j, k],
                "sizes": [len(A), len(B)],
                "expected": expected,
                "observed": rho,
                "kind": kind,
                "serialization": text,
            }
            (out if optimal else unresolved).append(rec)
    return checked, out, unresolved, ratios


def _corpus(max_poset_size: int):
    for n in range(1, max_poset_size + 1):
        for i, P in enumerate(posets_of_size(n)):
            yield f"p{n}-{i:04d}", "ideals", format_poset(P)


def search_level_covers(
    max_poset_size: int,
    problem: str = "atoms",
    extra_lattices: dict[str, Lattice] | None = None,
    budget: int | None = None,
    threads: int = 1,
) -> CampaignReport:
    """Audit level pairs of O(P) for every poset with at most ``max_poset_size`` elements.

    ``atoms``: rho([atoms, L_k]) == max(|A|, |B|) for every higher level.
    ``bound``: rho <= |A| + |B| - 2 for pairs with both sides larger than one.
    ``minimal``: rho == max(|A|, |B|) for every comparable level pair.

    Violations found by a search that ran out of budget are listed under
    ``summary["unresolved"]`` instead.
    """
    if problem not in PROBLEMS:
        raise PreconditionViolated(f"problem must be one of {PROBLEMS}")
    if not 0 <= max_poset_size <= MAX_SEARCH_POSET_SIZE:
        raise SizeLimit(f"corpus limited to posets with at most {MAX_SEARCH_POSET_SIZE} elements")
    t0 = time.perf_counter()
    jobs = [(ident, kind, text, None, problem, budget) for ident, kind, text in _corpus(max_poset_size)]
    for name, L in sorted((extra_lattices or {}).items()):
        jobs.append((name, "lattice", format_poset(L.poset), L, problem, budget))

    if threads > 1:
        # corpus lattices travel as poset text; workers rebuild O(P)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_check_lattice, jobs, chunksize=16))
    else:
        results = [_check_lattice(j) for j in jobs]

    checked, violations, unresolved, ratios = 0, [], [], []
    for c, v, u, r in results:
        checked += c
        violations += v
        unresolved += u
        ratios += r
    key = lambda rec: (rec["instance"], rec["levels"])
    violations.sort(key=key)
    unresolved.sort(key=key)
    summary = {
        "problem": problem,
        "max_poset_size": max_poset_size,
        "lattices": len(jobs),
        "unresolved": unresolved,
        "max_rho_over_max_side": round(max(ratios), 6) if ratios else None,
    }
    return CampaignReport(checked, violations, time.perf_counter() - t0, "exhaustive", None, summary)


def replay_violation(rec: dict) -> int:
    """Re-solve a recorded violation exactly; returns the minimum cover size."""
    P = parse_poset(rec["serialization"])
    if rec["kind"] == "ideals":
        D, _ = ideals_lattice(P)
    else:
        D = Lattice(P)
    j, k = rec["levels"]
    inst = candidate_intervals(convex_span(D.poset, D.level(j), D.level(k)))
    return exact_min_cover(inst).size
