"""Two Boolean cubes glued along an edge: a distributive lattice whose two
top levels have 3 elements each yet need 4 intervals to cover."""
from intervalcover import candidate_intervals, convex_span, exact_min_cover, gen_glued, thm4_cover
from intervalcover.families import glued_levels

D = gen_glued(3, 3)
j, k = glued_levels(3, 3)
A, B = sorted(D.level(j)), sorted(D.level(k))
print(f"{D.n} elements, levels {j} and {k}: A = {A}, B = {B}")

cover = exact_min_cover(candidate_intervals(convex_span(D.poset, A, B)))
print(f"minimum cover uses {cover.size} intervals:")
for iv in cover.intervals:
    print(f"  [{iv.a}, {iv.b}]")

c = thm4_cover(D, j, k)
print(f"constructive family: {c.size} intervals (bound {c.trace['bound']}), relabelling {c.trace['relabelling']}")

for n in range(2, 6):
    row = []
    for m in range(2, 6):
        G = gen_glued(n, m)
        jj, kk = glued_levels(n, m)
        row.append(exact_min_cover(candidate_intervals(convex_span(G.poset, G.level(jj), G.level(kk)))).size)
    print(f"n = {n}: rho for m = 2..5 -> {row}")
