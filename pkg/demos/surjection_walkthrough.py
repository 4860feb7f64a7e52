"""Build the map B -> A for a small poset, show how it was found, and turn
it into an interval cover of the ideal lattice."""
from intervalcover import build_poset, build_surjection, cover_from_surjection, ideals_lattice, verify_surjection

# zigzag 0 < 1 > 2 < 3 > 4 < 5, plus an isolated 6 that sits in both antichains
P = build_poset([(0, 1), (2, 1), (2, 3), (4, 3), (4, 5)], 7)
A, B = {0, 2, 4, 6}, {1, 3, 5, 6}

f = build_surjection(P, A, B)
print("map:", dict(sorted(f.map.items())))
for key in ("peeled", "deletions", "stars", "completion"):
    print(f"  {key}: {f.trace.get(key)}")
print("passes the ideal check:", verify_surjection(P, A, B, f))

D, M = ideals_lattice(P)
A2, B2 = {0, 2, 4}, {1, 3, 5}
g = build_surjection(P, A2, B2)
cover = cover_from_surjection(M, A2, B2, g)
print(f"O(P) has {D.n} elements; cover of [bold A, bar B] by {cover.size} intervals, valid = {cover.is_valid()}")
