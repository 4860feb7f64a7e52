"""Interval covers of convex subsets of finite posets and distributive lattices."""
from .birkhoff import (
    BirkhoffMaps,
    DistributiveLattice,
    Lattice,
    as_distributive,
    dual_lattice,
    ideals_lattice,
    irreducibles,
    reconstruct_poset,
    verify_distributive,
)
from .constructive import (
    Surjection,
    atoms_coatoms_cover,
    build_surjection,
    cover_from_surjection,
    join_irreducible_cover,
    thm4_cover,
    two_level_cover,
    verify_surjection,
)
from .cover import (
    CoverInstance,
    Interval,
    IntervalCover,
    brute_force_min_cover,
    candidate_intervals,
    exact_min_cover,
    greedy_cover,
    icp_check,
)
from .errors import *  # noqa: F401,F403
from .families import (
    gen_all_posets,
    gen_boolean,
    gen_chain_product,
    gen_figure1,
    gen_frankl,
    gen_glued,
    gen_random_poset,
)
from .harness import CampaignReport, check_daykin_frankl, search_level_covers
from .poset import (
    ConvexSpan,
    Poset,
    antichain_relations,
    build_poset,
    convex_span,
    enumerate_ideals,
    parse_poset,
    rank_profile,
    read_poset,
    width,
    write_poset,
)
from .scd import SCD, boolean_level_cover, gk_decomposition, phi, psi

__version__ = "0.1.0"
