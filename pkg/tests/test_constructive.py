import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_antichains, posets
from intervalcover.birkhoff import ideals_lattice
from intervalcover.constructive import (
    atoms_coatoms_cover,
    build_surjection,
    cover_from_surjection,
    join_irreducible_cover,
    onto_maps,
    reduce_to_stars,
    surjection_failure,
    thm4_bound,
    thm4_cover,
    thm4_params,
    two_level_cover,
    unique_configuration_witnesses,
    valid_surjections,
    verify_surjection,
)
from intervalcover.cover import candidate_intervals, exact_min_cover
from intervalcover.errors import (
    LevelSizeMismatch,
    NotAntichain,
    NotDistributive,
    NotDominated,
    NotLevels,
    SizeOrder,
    SurjectionInvalid,
    TooSmall,
)
from intervalcover.families import gen_boolean, gen_chain_product, gen_figure1, gen_glued, note3_poset, note4_poset, posets_of_size
from intervalcover.poset import antichain, antichain_relations, build_poset, chain, convex_span, rank_profile

A1, B1, B2, A2 = 0, 1, 2, 3


def two_stars():
    # a1=0 < b1=1, a1 < b1'=2; a2=3 < b2=4
    return build_poset([(0, 1), (0, 2), (3, 4)], 5)


def test_single_star():
    P = build_poset([(0, 1), (0, 2)], 3)
    f = build_surjection(P, {0}, {1, 2})
    assert f.map == {1: 0, 2: 0}


def test_two_stars_cyclic_then_completion():
    P = two_stars()
    f = build_surjection(P, {0, 3}, {1, 2, 4})
    assert f.map == {1: 3, 4: 0, 2: 0}
    assert f.is_onto() and verify_surjection(P, {0, 3}, {1, 2, 4}, f)
    assert f.trace["completion"] == [{"b": 2, "a": 0}]


def test_antichain_peels_to_a_cycle():
    f = build_surjection(antichain(3), {0, 1, 2}, {0, 1, 2})
    assert sorted(f.map.values()) == [0, 1, 2]
    assert all(f.map[b] != b for b in range(3))
    assert len(f.trace["peeled"]) == 2


def test_surjection_errors():
    with pytest.raises(NotDominated):
        build_surjection(note4_poset(), {A1, A2}, {B1, B2})
    with pytest.raises(NotAntichain):
        build_surjection(chain(2), {0, 1}, {1})
    with pytest.raises(SizeOrder):
        build_surjection(antichain(3), {0, 1, 2}, {0, 1})


def test_star_reduction_records_deletions():
    # zigzag a0 < b0 > a1 < b1 > a2 < b2
    P = build_poset([(0, 1), (2, 1), (2, 3), (4, 3), (4, 5)], 6)
    deletions = []
    forest = reduce_to_stars(frozenset({0, 2, 4}), frozenset({1, 3, 5}), {(0, 1), (2, 1), (2, 3), (4, 3), (4, 5)}, deletions)
    assert deletions and forest.elements() == set(range(6))
    for s in forest.stars:
        assert P.le(s.a, s.b)


def test_verify_examples():
    P = note4_poset()
    f = {B1: A1, B2: A2}
    assert not verify_surjection(P, {A1, A2}, {B1, B2}, f)
    X = surjection_failure(P, {A1, A2}, {B1, B2}, f)
    assert X is not None and X & (1 << A1 | 1 << A2) and (1 << B1 | 1 << B2) & ~X
    # one-element A: every map is fine
    Q = build_poset([(0, 1), (0, 2)], 3)
    assert verify_surjection(Q, {0}, {1, 2}, {1: 0, 2: 0})


def test_note4_has_no_valid_map_and_no_small_cover():
    P = note4_poset()
    assert valid_surjections(P, {A1, A2}, {B1, B2}) == []
    D, M = ideals_lattice(P)
    span = convex_span(D.poset, {M.bold[A1], M.bold[A2]}, {M.bar[B1], M.bar[B2]})
    assert exact_min_cover(candidate_intervals(span)).size > 2


def test_note3_cover_without_a_map():
    P = note3_poset()
    assert valid_surjections(P, {A1, A2}, {B1, B2}) == []
    D, M = ideals_lattice(P)
    span = convex_span(D.poset, {M.bold[A1], M.bold[A2]}, {M.bar[B1], M.bar[B2]})
    assert len(span) == 4
    assert exact_min_cover(candidate_intervals(span)).size == 2


def test_cover_from_cyclic_map_on_antichain():
    P = antichain(3)
    D, M = ideals_lattice(P)
    f = {0: 1, 1: 2, 2: 0}
    c = cover_from_surjection(M, {0, 1, 2}, {0, 1, 2}, f)
    assert c.size == 3 and c.is_valid()
    assert c.union() == frozenset(range(1, 7))
    with pytest.raises(SurjectionInvalid):
        cover_from_surjection(M, {0, 1, 2}, {0, 1, 2}, {0: 0, 1: 1, 2: 2})


def test_cover_from_single_upper_element():
    P = build_poset([(0, 2), (1, 2)], 3)
    D, M = ideals_lattice(P)
    # A = {0}, B = {1}: 0 is not above 1 and 1 is not below 0
    c = cover_from_surjection(M, {0}, {1}, {1: 0})
    assert c.size == 1 and c.is_valid()


@settings(max_examples=80, deadline=None)
@given(posets(min_n=1, max_n=7), st.data())
def test_built_maps_always_verify(P, data):
    acs = [a for a in brute_antichains(P) if a]
    A = data.draw(st.sampled_from(acs))
    B = data.draw(st.sampled_from(acs))
    if len(A) > len(B) or not antichain_relations(P, A, B).le:
        return
    f = build_surjection(P, A, B)
    assert f.is_onto()
    assert verify_surjection(P, A, B, f)


@pytest.mark.parametrize("n", range(1, 5))
def test_map_exists_iff_cover_by_distinct_tops(n):
    for P in posets_of_size(n):
        D, M = ideals_lattice(P)
        acs = [a for a in brute_antichains(P) if a]
        for A, B in itertools.product(acs, repeat=2):
            if not antichain_relations(P, A, B).not_ge:
                continue
            has_map = bool(valid_surjections(P, A, B))
            span = convex_span(D.poset, {M.bold[a] for a in A}, {M.bar[b] for b in B})
            Bs = sorted(B)
            covers = False
            for values in itertools.product(sorted(A), repeat=len(Bs)):
                u = 0
                for a, b in zip(values, Bs):
                    u |= D.poset.interval_mask(M.bold[a], M.bar[b])
                covers |= u == span.mask
            assert has_map == covers
            if covers:
                assert exact_min_cover(candidate_intervals(span)).size == len(B)


def test_onto_maps_counts():
    assert len(list(onto_maps({0, 1}, {2, 3, 4}))) == 6


def test_atoms_coatoms_examples(b3):
    c = atoms_coatoms_cover(b3)
    assert c.size == 3 and c.is_valid() and c.union() == frozenset(range(1, 7))
    C, _ = ideals_lattice(chain(2))
    c = atoms_coatoms_cover(C)
    assert c.size == 1 and c.intervals[0].a == c.intervals[0].b
    with pytest.raises(TooSmall):
        atoms_coatoms_cover(gen_chain_product([2]))
    with pytest.raises(NotDistributive):
        atoms_coatoms_cover(gen_figure1(2, 2))


@pytest.mark.parametrize("n", range(1, 6))
def test_atoms_coatoms_on_corpus(n):
    for P in posets_of_size(n):
        D, _ = ideals_lattice(P)
        if D.n < 3:
            continue
        c = atoms_coatoms_cover(D)
        assert c.is_valid()
        assert c.union() == frozenset(range(D.n)) - {D.bottom, D.top}
        assert c.size == max(len(D.atoms), len(D.coatoms))


def test_join_irreducible_cover_degenerate_flag():
    D, _ = ideals_lattice(build_poset([(0, 1), (0, 2)], 3))
    # calA = {down(0)}, calB = {down(1), down(2)}
    J = sorted(x for x in range(D.n) if D.poset.lower_covers[x].bit_count() == 1)
    low = min(J, key=lambda x: D.poset.down[x].bit_count())
    high = [x for x in J if x != low]
    c = join_irreducible_cover(D, {low}, high)
    assert c.trace["degenerate"] and c.is_valid()


def test_two_level_examples():
    G = gen_chain_product([2, 3])
    c = two_level_cover(G, 1, 2)
    assert c.size == 2 and c.is_valid()
    D = gen_glued(2, 2)
    c = two_level_cover(D, 1, 2)
    assert c.trace["branch"] == "split" and c.size == 2 and c.is_valid()
    with pytest.raises(LevelSizeMismatch):
        two_level_cover(gen_boolean(3), 1, 2)
    with pytest.raises(NotLevels):
        two_level_cover(G, 1, 9)


def test_glued22_split_cover():
    D = gen_glued(2, 2)
    # B(2) = {0, 1, 2, 3}; the upper square adds {4, 5}
    A, B = D.level(1), D.level(2)
    assert A == {1, 2} and B == {3, 4}
    c = two_level_cover(D, 1, 2)
    assert {(iv.a, iv.b) for iv in c.intervals} == {(1, 3), (2, 4)}


def test_thm4_params_and_bounds():
    assert thm4_params(2, 3) == (2, 3)
    assert thm4_params(3, 3) == (2, 2)
    assert thm4_params(4, 4) == (4, 4)
    assert thm4_bound(3, 3) == 7 and thm4_bound(2, 3) == 4 and thm4_bound(2, 2) == 2


@pytest.mark.parametrize("n,m,bound,rho", [(3, 3, 7, 4), (2, 3, 4, 3)])
def test_thm4_glued(n, m, bound, rho):
    D = gen_glued(n, m)
    c = thm4_cover(D, n - 1, n)
    assert c.is_valid() and c.trace["bound"] == bound and c.size <= bound
    span = convex_span(D.poset, D.level(n - 1), D.level(n))
    assert exact_min_cover(candidate_intervals(span)).size == rho


def test_thm4_grid():
    c = thm4_cover(gen_chain_product([2, 3]), 1, 2)
    assert c.size == 2 and c.is_valid()


def test_level_errors():
    G = gen_chain_product([2, 3])
    with pytest.raises(NotDominated):
        thm4_cover(G, 2, 1)
    with pytest.raises(NotLevels):
        thm4_cover(G, 1, 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_level_constructions_on_corpus(n):
    for P in posets_of_size(n):
        D, _ = ideals_lattice(P)
        levels = D.ranks.levels
        for j, k in itertools.combinations(range(len(levels)), 2):
            A, B = levels[j], levels[k]
            if not antichain_relations(D.poset, A, B).le:
                continue
            if min(len(A), len(B)) == 2:
                c = two_level_cover(D, j, k)
                assert c.is_valid() and c.size == max(len(A), len(B))
            if len(A) > 1 and len(B) > 1:
                c = thm4_cover(D, j, k)
                assert c.is_valid() and c.size <= thm4_bound(len(A), len(B))


@pytest.mark.parametrize("n", range(1, 7))
def test_no_unique_configurations(n):
    for P in posets_of_size(n):
        D, _ = ideals_lattice(P)
        assert unique_configuration_witnesses(D) == []


class _Ranked:
    def __init__(self, P):
        self.poset = P
        self.ranks = rank_profile(P)


def test_unique_configuration_scan_finds_planted_witness():
    # a=0 < x=1 < b=3 and a < y=2 < c=4; d=5 < 6 < b, c keeps the bottom level wide
    P = build_poset([(0, 1), (0, 2), (1, 3), (2, 4), (5, 6), (6, 3), (6, 4)], 7)
    w = unique_configuration_witnesses(_Ranked(P))
    assert w and w[0]["a"] == 0 and {w[0]["b"], w[0]["c"]} == {3, 4}
