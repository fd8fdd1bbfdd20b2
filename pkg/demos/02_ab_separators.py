# Separating two vertex sets by sets of small fractional cover.
#
# Given a family of vertex sets, the LP asks for weights on family members so
# that every induced A-B path is covered. Rounding turns that into an actual
# separator; when the LP value is large, sampling yields many paths instead.
# Run with: python demos/02_ab_separators.py

import math

from twalpha.absep import ab_round, menger_dichotomy, path_distribution, small_alpha_uv_separator
from twalpha.containers import ContainerParams
from twalpha.graph import complete_bipartite, cycle, is_ab_separator, maximal_cliques, path

g = cycle(6)
f = maximal_cliques(g)  # the six edges
A, B = (0,), (3,)

dist = path_distribution(g, A, B, f)
print("C6, A={0}, B={3}: LP value", round(dist.f_value, 4))

res = ab_round(g, f, 2, A, B, dist.x)
print("rounded separator", res.separator, "fcov", round(res.fcov, 4), "bound", round(res.bound, 4))
print("separates:", is_ab_separator(g, res.separator, A, B))

# The dichotomy: a cheap separator when the LP is small, a path packing otherwise.
ell = math.ceil(math.log2(2 * len(f)))
for target in (5.0, 0.5):
    out = menger_dichotomy(g, A, B, f, 2, target, ell, seed=0)
    print(f"\nf_target={target}: branch {out.branch}")
    if out.packing:
        print("  paths:", out.packing.paths[:4], "..." if len(out.packing.paths) > 4 else "")
        print("  max member load:", max(out.packing.chi), "cap 6*ell =", 6 * ell)

# u-v separation of bounded independence number.
r = small_alpha_uv_separator(path(5), 0, 4, ContainerParams(2, 2, 1), f_target=10)
print("\nP5, u=0, v=4:", r.branch, r.separator, "alpha", r.separator_alpha)
r = small_alpha_uv_separator(complete_bipartite(4, 4), 0, 1, ContainerParams(1, 3, 1), f_target=1)
print("K44, u=0, v=1:", r.branch, "witness on", r.witness.n, "vertices, omega", r.witness_omega)
