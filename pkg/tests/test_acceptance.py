"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import itertools
import time
from contextlib import contextmanager
from math import comb

import numpy as np
import pytest

from intervalcover.birkhoff import Lattice, bold_bar, distributivity_certificate, ideals_lattice, verify_distributive
from intervalcover.constructive import (
    atoms_coatoms_cover,
    build_surjection,
    thm4_bound,
    thm4_cover,
    two_level_cover,
    valid_surjections,
    verify_surjection,
)
from intervalcover.cover import brute_force_min_cover, candidate_intervals, exact_min_cover
from intervalcover.families import (
    boolean_poset,
    gen_figure1,
    gen_frankl,
    gen_glued,
    gen_random_poset,
    glued_levels,
    note3_poset,
    note4_poset,
    posets_of_size,
)
from intervalcover.harness import check_daykin_frankl
from intervalcover.poset import antichain_masks, antichain_relations, convex_span, from_mask
from intervalcover.scd import boolean_level_pairs, gk_decomposition

A1, B1, B2, A2 = 0, 1, 2, 3


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number: int, title: str, limit: float):
        t0 = time.perf_counter()
        status, note = "FAIL", ""
        try:
            yield
            elapsed = time.perf_counter() - t0
            if elapsed < limit:
                status = "PASS"
            else:
                note = f" (runtime over the {limit:g} s limit)"
        finally:
            elapsed = time.perf_counter() - t0
            with capsys.disabled():
                print(f"\n[{status}] criterion {number:2d}: {title} ({elapsed:.2f} s){note}")
        assert status == "PASS", note

    return run


def rho(P, A, B):
    c = exact_min_cover(candidate_intervals(convex_span(P, A, B)))
    assert c.optimal and c.is_valid()
    return c.size


def corpus(max_n):
    for n in range(1, max_n + 1):
        yield from posets_of_size(n)


def comparable_level_pairs(D):
    levels = D.ranks.levels
    for j, k in itertools.combinations(range(len(levels)), 2):
        A, B = levels[j], levels[k]
        if antichain_relations(D.poset, A, B).le:
            yield j, k, A, B


def test_01_glued_b3(criterion):
    with criterion(1, "glued B(3) needs 4 intervals on levels 2, 3", 1):
        D = gen_glued(3, 3)
        j, k = glued_levels(3, 3)
        assert rho(D.poset, D.level(j), D.level(k)) == 4


def test_02_glued_family(criterion):
    with criterion(2, "glued(n, m), 2 <= n, m <= 5: distributive, rho = n + m - 2", 30):
        for n, m in itertools.product(range(2, 6), repeat=2):
            D = gen_glued(n, m)
            assert verify_distributive(D)
            j, k = glued_levels(n, m)
            assert rho(D.poset, D.level(j), D.level(k)) == n + m - 2, (n, m)


def test_03_frankl(criterion):
    with criterion(3, "Frankl example rho = r * s", 10):
        for r, s in [(2, 2), (2, 3), (3, 3)]:
            D, X, Y = gen_frankl(r, s)
            assert rho(D.poset, X, Y) == r * s


def test_04_figure1(criterion):
    with criterion(4, "figure-1 lattice: lattice, not distributive, rho = r * s", 10):
        for r, s in itertools.product(range(2, 5), repeat=2):
            L = gen_figure1(r, s)
            assert isinstance(L, Lattice)
            assert distributivity_certificate(L) is None
            assert rho(L.poset, L.atoms, L.coatoms) == r * s


def test_05_boolean_strong_icp(criterion):
    with criterion(5, "B(n) level covers, n <= 8; exact solver agrees for n <= 4", 120):
        for n in range(1, 9):
            for j in range(n + 1):
                for k in range(j, n + 1):
                    pairs = boolean_level_pairs(n, j, k)
                    assert len(pairs) == max(comb(n, j), comb(n, k))
                    union = np.zeros(1 << n, dtype=bool)
                    Z = np.arange(1 << n)
                    for X, Y in pairs:
                        union |= ((Z & X) == X) & ((Z & ~Y) == 0)
                    slab = np.array([j <= z.bit_count() <= k for z in range(1 << n)])
                    assert np.array_equal(union, slab)
                    if n <= 4:
                        B = boolean_poset(n)
                        lower = [x for x in range(1 << n) if x.bit_count() == j]
                        upper = [x for x in range(1 << n) if x.bit_count() == k]
                        assert rho(B, lower, upper) == len(pairs)


def test_06_gk_scd(criterion):
    with criterion(6, "Greene-Kleitman decomposition of B(n), n <= 12", 60):
        for n in range(1, 13):
            rep = gk_decomposition(n).verify()
            assert rep["partition"] and rep["symmetric"] and rep["star"]
            assert rep["chains"] == comb(n, n // 2)


def test_07_atoms_coatoms(criterion):
    # every class through |P| = 7 (2045 classes at 7); exact check through 5
    with criterion(7, "atoms/coatoms cover of O(P), |P| <= 7", 600):
        for P in corpus(7):
            D, _ = ideals_lattice(P)
            if D.n < 3:
                continue
            c = atoms_coatoms_cover(D)
            size = max(len(D.atoms), len(D.coatoms))
            assert c.is_valid() and c.size == size
            if P.n <= 5:
                assert rho(D.poset, D.atoms, D.coatoms) == size


def test_08_surjections(criterion):
    with criterion(8, "surjection built and verified for every A <= B, |P| <= 6", 600):
        count = 0
        for P in corpus(6):
            acs = [from_mask(m) for m in antichain_masks(P) if m]
            for A, B in itertools.product(acs, repeat=2):
                if len(A) > len(B) or not antichain_relations(P, A, B).le:
                    continue
                f = build_surjection(P, A, B)
                assert f.is_onto() and verify_surjection(P, A, B, f)
                count += 1
        assert count > 0


def test_09_notes(criterion):
    with criterion(9, "no valid map on note4 or note3; rho = 2 on note3", 1):
        P = note4_poset()
        A, B = [A1, A2], [B1, B2]
        for values in itertools.product(A, repeat=len(B)):
            assert not verify_surjection(P, A, B, dict(zip(B, values)))
        Q = note3_poset()
        assert valid_surjections(Q, A, B) == []
        D, M = ideals_lattice(Q)
        calA, _ = bold_bar(M, A)
        _, barB = bold_bar(M, B)
        assert rho(D.poset, calA, barB) == 2


def test_10_two_level(criterion):
    with criterion(10, "two-level cover on O(P), |P| <= 7", 600):
        hits = 0
        for P in corpus(7):
            D, _ = ideals_lattice(P)
            for j, k, A, B in comparable_level_pairs(D):
                if min(len(A), len(B)) == 2:
                    c = two_level_cover(D, j, k)
                    assert c.is_valid() and c.size == max(len(A), len(B))
                    hits += 1
        assert hits > 0


def test_11_thm4(criterion):
    with criterion(11, "level-pair cover within |A||B| - min (+1), |P| <= 7", 600):
        hits = 0
        for P in corpus(7):
            D, _ = ideals_lattice(P)
            for j, k, A, B in comparable_level_pairs(D):
                if len(A) > 1 and len(B) > 1:
                    c = thm4_cover(D, j, k)
                    assert c.is_valid() and c.size <= thm4_bound(len(A), len(B))
                    hits += 1
        assert hits > 0


def test_12_not_ge_equivalence(criterion):
    with criterion(12, "A not>= B iff bold(A) <= bar(B) on 1000 random posets", 60):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(1, 11))
            P = gen_random_poset(n, float(rng.uniform(0.05, 0.9)), seed=int(rng.integers(2**31)))
            D, M = ideals_lattice(P)
            acs = [from_mask(m) for m in antichain_masks(P) if m]
            for _ in range(12):
                A = acs[rng.integers(len(acs))]
                B = acs[rng.integers(len(acs))]
                calA, _ = bold_bar(M, A)
                _, barB = bold_bar(M, B)
                assert antichain_relations(P, A, B).not_ge == antichain_relations(D.poset, calA, barB).le


def test_13_daykin_frankl(criterion):
    with criterion(13, "Daykin-Frankl ratio over every convex subset of B(4)", 60):
        rep = check_daykin_frankl(4)
        assert rep.instances_checked > 0 and rep.violations == []


def subset_oracle(P, span, candidates):
    target = set(span.elements)
    sets = [{z for z in target if P.le(c.a, z) and P.le(z, c.b)} for c in candidates]
    for k in range(1, len(sets) + 1):
        for pick in itertools.combinations(sets, k):
            if set().union(*pick) == target:
                return k
    return None


def test_14_solver_oracle(criterion):
    with criterion(14, "exact solver matches subset enumeration on 200 instances", 60):
        rng = np.random.default_rng(14)
        seen = 0
        while seen < 200:
            P = gen_random_poset(int(rng.integers(2, 10)), float(rng.uniform(0.1, 0.7)), seed=int(rng.integers(2**31)))
            acs = [from_mask(m) for m in antichain_masks(P) if m]
            A = acs[rng.integers(len(acs))]
            B = acs[rng.integers(len(acs))]
            if not antichain_relations(P, A, B).le:
                continue
            inst = candidate_intervals(convex_span(P, A, B))
            if len(inst.candidates) > 12:
                continue
            exact = exact_min_cover(inst)
            assert exact.optimal
            assert exact.size == subset_oracle(P, inst.span, inst.candidates) == brute_force_min_cover(inst)
            seen += 1
