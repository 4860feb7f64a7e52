"""Small experiment campaigns: the width ratio on B(4) and a level-cover
audit of O(P) for posets with at most five elements."""
from intervalcover import check_daykin_frankl, search_level_covers

rep = check_daykin_frankl(4)
print(f"B(4): {rep.instances_checked} convex sets, {len(rep.violations)} violations, min ratio {rep.summary['min_ratio']}")

for problem in ("atoms", "bound", "minimal"):
    rep = search_level_covers(5, problem)
    print(f"{problem:8s} {rep.instances_checked:5d} level pairs, {len(rep.violations)} violations")
    if rep.violations:
        v = rep.violations[0]
        print(f"         first: {v['instance']} levels {v['levels']} sizes {v['sizes']} rho {v['observed']}")
