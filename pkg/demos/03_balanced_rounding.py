# Balanced separators by region growing.
#
# A hub graph has many leaves attached to a few hubs. Taking the leaves as the
# terminal set, a good balanced separator is (roughly) the hubs. The LP gives a
# fractional version; region growing around terminals rounds it.
# Run with: python demos/03_balanced_rounding.py

from twalpha.balsep import cutoff_step, region_growing_params, round_balanced_separator, solve_balanced_lp
from twalpha.graph import components, maximal_cliques, path
from twalpha.suite import hub_graph

g = hub_graph(leaves=22, hubs=3, seed=5)
leaves = tuple(range(22))  # hubs are the last three vertices
f = maximal_cliques(g)
print("hub graph:", g.n, "vertices,", len(f), "cliques,", len(leaves), "terminals")

sol = solve_balanced_lp(g, leaves, f)
print("LP optimum:", round(float(sol.objective), 4))

res = round_balanced_separator(g, leaves, f, a_bound=2, solution=sol)
print("separator:", res.separator, "fcov", round(res.fcov, 4), "iterations", res.iterations)
for c in res.claims:
    print(f"  [{'ok' if c['pass'] else 'FAIL'}] {c['name']}")
sizes = sorted(len(set(c) & set(leaves)) for c in components(g, res.separator))
print("terminals per remaining component:", sizes)

# At this scale the radius of the regions usually exceeds the graph, so the
# cutoff loop never fires. A long path with a tiny uniform weight and a small
# radius shows one cutoff step.
p = path(40)
evens = tuple(range(0, 40, 2))
edges = maximal_cliques(p)
x = [0.005] * len(edges)
params = region_growing_params(p, edges, x, sum(x), 2, epsilon=0.011)
step = cutoff_step(p, evens, edges, x, sum(x), 2, (), tuple(range(40)), params)
print("\nP40 cutoff: S =", step.S, "layer", step.layer.ell, "|A| =", len(step.A), "|B| =", len(step.B))
