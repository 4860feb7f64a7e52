import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from intervalcover.poset import Poset, build_poset


def naive_closure(n, edges):
    """Reflexive-transitive closure by repeated relaxation; test oracle."""
    rel = {(i, i) for i in range(n)} | set(edges)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    leq = np.zeros((n, n), dtype=bool)
    for a, b in rel:
        leq[a, b] = True
    return leq


@st.composite
def posets(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    # shuffle labels so posets are not always naturally labelled
    perm = draw(st.permutations(range(n)))
    edges = [(perm[a], perm[b]) for a, b in chosen]
    return build_poset(edges, n)


def brute_ideals(P: Poset):
    out = []
    for bits in itertools.product((0, 1), repeat=P.n):
        S = {i for i, b in enumerate(bits) if b}
        if all(x in S for y in S for x in range(P.n) if P.leq[x, y]):
            out.append(frozenset(S))
    return out


def brute_antichains(P: Poset):
    out = []
    for r in range(P.n + 1):
        for S in itertools.combinations(range(P.n), r):
            if all(not P.leq[x, y] for x in S for y in S if x != y):
                out.append(frozenset(S))
    return out


@pytest.fixture
def b3():
    from intervalcover.families import gen_boolean

    return gen_boolean(3)
