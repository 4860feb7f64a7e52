"""Symmetric chains of B(n) and the level covers they induce."""
from math import comb

from intervalcover import boolean_level_cover, gk_decomposition

n = 5
scd = gk_decomposition(n)
for c in sorted(scd.chains, key=len, reverse=True):
    print(" < ".join(c.words()))
print(scd.verify())

for j, k in [(1, 3), (2, 2), (1, 4), (2, 3)]:
    c = boolean_level_cover(n, j, k)
    print(f"levels {j}..{k}: {c.size} intervals, max(C(n,j), C(n,k)) = {max(comb(n, j), comb(n, k))}, valid = {c.is_valid()}")
