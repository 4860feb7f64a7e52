import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_antichains, posets
from intervalcover.cover import (
    CoverInstance,
    Interval,
    IntervalCover,
    brute_force_min_cover,
    candidate_intervals,
    exact_min_cover,
    greedy_cover,
    icp_check,
    instance,
    lower_bound,
    slab_span,
)
from intervalcover.errors import Infeasible, NotRanked
from intervalcover.families import boolean_poset, gen_frankl, gen_glued, glued_levels
from intervalcover.poset import ConvexSpan, antichain_relations, build_poset, chain, convex_span, rank_profile


def glued33():
    D = gen_glued(3, 3)
    j, k = glued_levels(3, 3)
    return candidate_intervals(convex_span(D.poset, D.level(j), D.level(k)))


def test_candidate_examples(b3):
    assert len(instance(chain(4), {0}, {3}).candidates) == 1
    assert len(candidate_intervals(convex_span(b3.poset, b3.atoms, b3.coatoms)).candidates) == 6


def test_frankl_mixed_pairs_in_one_candidate():
    D, X, Y = gen_frankl(2, 2)
    inst = candidate_intervals(convex_span(D.poset, X, Y))
    xs = (1, 2)  # X = {1, 2} as positions 0, 1
    ys = (4, 8)
    for x, y in itertools.product(xs, ys):
        hits = [c for c in inst.candidates if D.poset.le(c.a, x | y) and D.poset.le(x | y, c.b)]
        assert len(hits) == 1


def test_exact_examples():
    assert exact_min_cover(glued33()).size == 4
    D, X, Y = gen_frankl(2, 2)
    assert exact_min_cover(candidate_intervals(convex_span(D.poset, X, Y))).size == 4
    assert exact_min_cover(instance(chain(5), {1}, {4})).size == 1
    B4 = boolean_poset(4)
    lv = rank_profile(B4).levels
    c = exact_min_cover(candidate_intervals(convex_span(B4, lv[1], lv[3])))
    assert c.size == 4 and c.optimal and c.is_valid()


def test_greedy_examples():
    assert greedy_cover(instance(chain(3), {0}, {2})).size == 1
    g = greedy_cover(glued33())
    assert 4 <= g.size <= 6 and g.is_valid()


def test_infeasible_instance():
    P = chain(3)
    span = convex_span(P, {0}, {2})
    with pytest.raises(Infeasible):
        exact_min_cover(CoverInstance(span, (Interval(0, 0),)))


def test_budget_returns_flagged_incumbent():
    B = boolean_poset(5)
    lv = rank_profile(B).levels
    inst = candidate_intervals(convex_span(B, lv[1], lv[4]))
    c = exact_min_cover(inst, budget=1)
    assert not c.optimal and c.is_valid()
    assert exact_min_cover(inst).size == 5


def test_cover_json_schema():
    c = exact_min_cover(glued33())
    data = json.loads(c.to_json())
    assert set(data) == {"rho", "optimal", "intervals", "span_size"}
    assert data["rho"] == 4 and data["span_size"] == 6
    assert all(set(iv) == {"a", "b"} for iv in data["intervals"])


def test_is_valid_rejects_partial_and_bad_endpoints(b3):
    span = convex_span(b3.poset, b3.atoms, b3.coatoms)
    assert not IntervalCover(span, [Interval(1, 3)]).is_valid()
    assert not IntervalCover(span, [Interval(0, 7)]).is_valid()


@st.composite
def instances(draw, max_n=7):
    P = draw(posets(min_n=1, max_n=max_n))
    acs = [a for a in brute_antichains(P) if a]
    A = draw(st.sampled_from(acs))
    B = draw(st.sampled_from(acs))
    if not antichain_relations(P, A, B).le:
        B = P.maximal(set().union(*(P.interval(a, b) for a in A for b in range(P.n) if P.le(a, b))))
    return instance(P, A, B)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_exact_against_oracle_and_bounds(inst):
    exact = exact_min_cover(inst)
    assert exact.is_valid() and exact.optimal
    lb = lower_bound(inst.span)
    assert lb <= exact.size <= min(len(inst.candidates), len(inst.span.lower) * len(inst.span.upper))
    if len(inst.candidates) <= 12:
        assert exact.size == brute_force_min_cover(inst)
    g = greedy_cover(inst)
    assert g.is_valid() and g.size >= exact.size


def test_icp_examples():
    assert icp_check(boolean_poset(4), strong=True).holds
    D = gen_glued(3, 3)
    rep = icp_check(D.poset, 2, 3)
    assert not rep.holds and rep.rho == 4 and rep.bound == 3
    with pytest.raises(NotRanked):
        icp_check(build_poset([(0, 1), (1, 3), (2, 3)], 4))


@given(posets(min_n=1, max_n=7))
def test_icp_diagonal_always_holds(P):
    try:
        prof = rank_profile(P)
    except NotRanked:
        return
    for j in range(prof.height + 1):
        assert icp_check(P, j, j).holds


def test_slab_span_of_b3_middle(b3):
    span = slab_span(b3.poset, 1, 2)
    assert isinstance(span, ConvexSpan) and len(span) == 6
