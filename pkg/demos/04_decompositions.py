# Tree decompositions with small bag independence, or a hard instance.
#
# The builder asks a provider for balanced separators of small fractional cover.
# When they exist it assembles a tree decomposition; when one does not, the
# failure is turned into an induced subgraph that certifies large treewidth.
# Run with: python demos/04_decompositions.py

from twalpha.balsep import extract_hard_instance
from twalpha.graph import complete_bipartite, maximal_cliques, path
from twalpha.suite import star
from twalpha.treedecomp import (brute_tw, brute_tw_alpha, build_td_small_alpha, check_tw_balanced_separator,
                                exhaustive_provider, td_independence, verify_td)

# On a star the provider always finds cheap separators, so the builder succeeds
# with bag independence within 1.5 times the target.
s = star(24)
out = extract_hard_instance(s, maximal_cliques(s), a_bound=2, b=1, f_target=1.0, i_size=20, epsilon=0.01)
td = out.decomposition
print("star(24):", out.branch, "with", len(td.bags), "bags, bag independence", td_independence(s, td))

# Exhaustive provider on a small graph, checked against brute force.
g = path(8)
td = build_td_small_alpha(g, 2, exhaustive_provider)
print("\nP8: valid", verify_td(g, td).passed, "bag independence", td_independence(g, td),
      "exact tree-alpha", brute_tw_alpha(g))

# K_{5,5} has no cheap balanced separator for one side.
k55 = complete_bipartite(5, 5)
out = extract_hard_instance(k55, maximal_cliques(k55), a_bound=2, b=1, f_target=0.1, i_size=4)
H = out.hard.H
print("\nK55:", out.branch, "subgraph on", H.n, "vertices")
cert = check_tw_balanced_separator(H, range(H.n), 2)
print("no balanced separator of size <= 2, so treewidth >=", cert.tw_lower_bound, "(exact:", brute_tw(H), ")")
