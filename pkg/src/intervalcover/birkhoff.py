"""Finite lattices and Birkhoff duality between posets and distributive lattices.

``ideals_lattice(P)`` builds O(P), the lattice of downsets of P, with its
elements numbered in the canonical ideal order of :mod:`intervalcover.poset`.
The maps ``bold(a) = down(a)`` and ``bar(a) = P - up(a)`` embed P onto the
join- and meet-irreducibles of O(P) respectively.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, reduce
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .errors import NotALattice, NotDistributive
from .poset import (
    Poset,
    _ideal_masks,
    format_poset,
    from_mask,
    ideal_masks,
    iter_bits,
    parse_poset,
    rank_profile,
)

# all triples are checked up to this many elements; larger lattices use the
# Birkhoff counting test |L| == |O(J(L))|
EXHAUSTIVE_DISTRIBUTIVITY_LIMIT = 60


def _bound_table(leq: np.ndarray) -> np.ndarray:
    """Least-upper-bound table for the order ``leq``; raises NotALattice."""
    n = leq.shape[0]
    L = leq.astype(np.int32)
    table = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        ub = leq[x][None, :] & leq  # ub[y, w]: x <= w and y <= w
        count = ub.astype(np.int32) @ L.T  # count[y, z] = #{w in ub[y] : z <= w}
        least = ub & (count == ub.sum(axis=1)[:, None])
        found = least.sum(axis=1)
        if (found != 1).any():
            y = int(np.argmax(found != 1))
            raise NotALattice(f"elements {x} and {y} have no least upper bound")
        table[x] = least.argmax(axis=1)
    return table


class Lattice:
    """A finite lattice: an order plus join and meet tables.

    Tables are validated least upper / greatest lower bounds when computed
    from the order.  ``lazy_tables`` defers building them for large
    structured lattices whose tables are only occasionally needed.
    """

    def __init__(
        self,
        poset: Poset,
        join: np.ndarray | None = None,
        meet: np.ndarray | None = None,
        *,
        lazy_tables: Callable[[], tuple[np.ndarray, np.ndarray]] | None = None,
    ):
        self.poset = poset
        if poset.n == 0:
            raise NotALattice("the empty poset is not a lattice")
        mins, maxs = poset.minimal(), poset.maximal()
        if len(mins) != 1 or len(maxs) != 1:
            raise NotALattice("a lattice needs a unique minimum and maximum")
        self.bottom = next(iter(mins))
        self.top = next(iter(maxs))
        self._lazy = lazy_tables
        if join is not None:
            self.__dict__["join"] = np.asarray(join)
        if meet is not None:
            self.__dict__["meet"] = np.asarray(meet)
        if lazy_tables is None:
            # force validation now
            self.join, self.meet

    @cached_property
    def join(self) -> np.ndarray:
        if self._lazy is not None:
            join, meet = self._lazy()
            self.__dict__["meet"] = meet
            return join
        return _bound_table(self.poset.leq)

    @cached_property
    def meet(self) -> np.ndarray:
        if self._lazy is not None:
            join, meet = self._lazy()
            self.__dict__["join"] = join
            return meet
        return _bound_table(self.poset.leq.T)

    @property
    def n(self) -> int:
        return self.poset.n

    def __len__(self) -> int:
        return self.poset.n

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    def join_of(self, elements: Iterable[int]) -> int:
        return reduce(lambda x, y: int(self.join[x, y]), elements, self.bottom)

    def meet_of(self, elements: Iterable[int]) -> int:
        return reduce(lambda x, y: int(self.meet[x, y]), elements, self.top)

    @cached_property
    def atoms(self) -> frozenset[int]:
        return from_mask(self.poset.upper_covers[self.bottom])

    @cached_property
    def coatoms(self) -> frozenset[int]:
        return from_mask(self.poset.lower_covers[self.top])

    @cached_property
    def ranks(self):
        return rank_profile(self.poset)

    def level(self, i: int) -> frozenset[int]:
        return self.ranks.levels[i]


class DistributiveLattice(Lattice):
    """A lattice carrying a certificate that the distributive law holds.

    ``certificate`` records how distributivity was established: by
    construction (``"ideals"``, ``"product"``), by checking every triple
    (``"exhaustive"``), or by the counting test (``"birkhoff-count"``).
    ``ideal_of`` maps elements to downsets (bitsets) of a source poset when
    the lattice was built as O(P).
    """

    def __init__(self, poset, join=None, meet=None, *, certificate: str, ideal_of=None, lazy_tables=None):
        super().__init__(poset, join, meet, lazy_tables=lazy_tables)
        self.certificate = certificate
        self.ideal_of = None if ideal_of is None else tuple(ideal_of)


@dataclass(frozen=True)
class BirkhoffMaps:
    """Embeddings of a poset P into O(P).

    ``bold[a]`` is the lattice index of down(a), a join-irreducible;
    ``bar[a]`` is the index of P - up(a), a meet-irreducible.
    """

    source: Poset
    lattice: DistributiveLattice
    bold: tuple[int, ...]
    bar: tuple[int, ...]


def lattice_from_poset(P: Poset) -> Lattice:
    return Lattice(P)


def _distributive_exhaustive(L: Lattice) -> bool:
    j, m = L.join, L.meet
    for x in range(L.n):
        mx = m[x]
        lhs = mx[j]  # x ^ (y v z)
        rhs = j[mx[:, None], mx[None, :]]  # (x ^ y) v (x ^ z)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _distributive_by_count(L: Lattice) -> bool:
    J, _ = L.poset.induced(irreducibles(L, "join"))
    limit = L.n + 1
    count = sum(1 for _ in itertools.islice(_ideal_masks(J), limit))
    return count == L.n


def distributivity_certificate(L: Lattice) -> str | None:
    """Method name that proves L distributive, or None if it is not."""
    if isinstance(L, DistributiveLattice):
        return L.certificate
    if L.n <= EXHAUSTIVE_DISTRIBUTIVITY_LIMIT:
        return "exhaustive" if _distributive_exhaustive(L) else None
    return "birkhoff-count" if _distributive_by_count(L) else None


def verify_distributive(L: Lattice | Poset) -> bool:
    """True iff the distributive law holds for all triples.

    A bare Poset is first turned into a lattice; NotALattice propagates.
    """
    if isinstance(L, Poset):
        L = lattice_from_poset(L)
    if isinstance(L, DistributiveLattice):
        # re-check rather than trust the stored certificate
        L = Lattice(L.poset, L.join, L.meet)
    return distributivity_certificate(L) is not None


def as_distributive(L: Lattice | Poset) -> DistributiveLattice:
    """Promote a lattice (or poset) to DistributiveLattice, or raise NotDistributive."""
    if isinstance(L, DistributiveLattice):
        return L
    if isinstance(L, Poset):
        L = lattice_from_poset(L)
    cert = distributivity_certificate(L)
    if cert is None:
        raise NotDistributive("the distributive law fails for some triple")
    return DistributiveLattice(L.poset, L.join, L.meet, certificate=cert)


def irreducibles(D: Lattice, kind: str = "join") -> frozenset[int]:
    """Elements with exactly one lower cover (``join``) or upper cover (``meet``)."""
    covers = {"join": D.poset.lower_covers, "meet": D.poset.upper_covers}[kind]
    return frozenset(x for x, c in enumerate(covers) if c.bit_count() == 1)


def ideals_lattice(P: Poset) -> tuple[DistributiveLattice, BirkhoffMaps]:
    """O(P) ordered by containment, with join = union and meet = intersection."""
    masks = ideal_masks(P)
    k, n = len(masks), P.n
    members = np.zeros((k, n), dtype=bool)
    for i, m in enumerate(masks):
        for x in iter_bits(m):
            members[i, x] = True
    # I <= J iff no element of I is missing from J
    leq = (members.astype(np.int32) @ (~members).T.astype(np.int32)) == 0
    poset = Poset(leq, check=False)

    if n <= 62:
        codes = np.array(masks, dtype=np.int64)
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(values: np.ndarray) -> np.ndarray:
            return order[np.searchsorted(sorted_codes, values)].astype(np.int32)

        join = lookup(codes[:, None] | codes[None, :])
        meet = lookup(codes[:, None] & codes[None, :])
    else:
        index = {m: i for i, m in enumerate(masks)}
        join = np.array([[index[a | b] for b in masks] for a in masks], dtype=np.int32)
        meet = np.array([[index[a & b] for b in masks] for a in masks], dtype=np.int32)

    D = DistributiveLattice(poset, join, meet, certificate="ideals", ideal_of=masks)
    index = {m: i for i, m in enumerate(masks)}
    full = P.full_mask
    bold = tuple(index[P.down[a]] for a in range(n))
    bar = tuple(index[full & ~P.up[a]] for a in range(n))
    return D, BirkhoffMaps(P, D, bold, bar)


def bold_bar(M: BirkhoffMaps, A: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    """Images of A under the two Birkhoff embeddings."""
    A = M.source.check_elements(A)
    return frozenset(M.bold[a] for a in A), frozenset(M.bar[a] for a in A)


def reconstruct_poset(D: Lattice) -> Poset:
    """The poset J(D) of join-irreducibles; labels are the lattice indices."""
    if not isinstance(D, DistributiveLattice) and distributivity_certificate(D) is None:
        raise NotDistributive("reconstruction needs a distributive lattice")
    J, idx = D.poset.induced(irreducibles(D, "join"))
    return Poset(J.leq, labels=idx, check=False)


def ideal_to_element(D: Lattice, J: Poset, ideal_mask: int) -> int:
    """Lattice element that is the join of an ideal of ``J = reconstruct_poset(D)``."""
    return D.join_of(J.labels[x] for x in iter_bits(ideal_mask))


# --- lattice files: ".poset" plus a JSON sidecar ---------------------------


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_lattice(D: Lattice, path, maps: BirkhoffMaps | None = None, extra: dict | None = None) -> None:
    path = Path(path)
    path.write_text(format_poset(D.poset))
    meta = {"bottom": int(D.bottom), "top": int(D.top)}
    if maps is not None:
        meta["bold"] = [int(x) for x in maps.bold]
        meta["bar"] = [int(x) for x in maps.bar]
        meta["source"] = format_poset(maps.source)
    if extra:
        meta.update(extra)
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_sidecar(path) -> dict:
    p = sidecar_path(path)
    return json.loads(p.read_text()) if p.exists() else {}


def read_lattice(path) -> Lattice:
    """Read a lattice from a ``.poset`` file; promoted to DistributiveLattice when it is one."""
    L = lattice_from_poset(parse_poset(Path(path).read_text()))
    cert = distributivity_certificate(L)
    if cert is None:
        return L
    return DistributiveLattice(L.poset, L.join, L.meet, certificate=cert)


def dual_lattice(L: Lattice) -> Lattice:
    """Order reversed; join and meet swap roles."""
    from .poset import dual

    Pd = dual(L.poset)
    if isinstance(L, DistributiveLattice):
        return DistributiveLattice(Pd, L.meet, L.join, certificate=L.certificate)
    return Lattice(Pd, L.meet, L.join)
