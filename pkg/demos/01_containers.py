# Container families on small graphs.
#
# A (b, a)-container family is a collection of vertex sets, each of independence
# number at most a, such that every independent set of size at most b lies in
# one of them. Run with: python demos/01_containers.py

from twalpha.containers import (ContainerParams, build_containers, container_lower_bound,
                                minimal_container_bruteforce, verify_container_family)
from twalpha.graph import alpha, complete_bipartite, gnp, omega

# K_{3,3}: clique number 2, independence number 3.
g = complete_bipartite(3, 3)
print("K33: omega =", omega(g), "alpha =", alpha(g))

# K_{3,3} contains the complement of two disjoint edges, so the structural
# precondition for (omega=2, k=2) fails. Skip the check to still build a family.
cf = build_containers(g, ContainerParams(omega=2, k=2, b=2), check_hypothesis=False)
# On six vertices the declared bound is far above n, so one member suffices.
print("family size:", len(cf), "declared alpha bound:", cf.a_bound)
for s in cf.family:
    print("  ", s, "alpha =", alpha(g, s))

report = verify_container_family(g, cf)
for c in report.claims():
    print(f"  [{'ok' if c['pass'] else 'FAIL'}] {c['name']}")

# A random graph with the general (b > omega) construction.
h = gnp(10, 0.6, seed=3)
p = ContainerParams(omega=omega(h), k=3, b=5)
cf = build_containers(h, p, check_hypothesis=False)
print("\ngnp(10, .6): omega =", p.omega, "family size =", len(cf), "max member alpha =",
      verify_container_family(h, cf).max_alpha)

# How small can a family be? Compare the brute-force minimum with the lower bound.
# Every (1, 1)-family on K33 needs nine members; the closed-form lower bound agrees.
print("\nlower bound for omega=3, b=1, a=1, k=2:", container_lower_bound(3, 1, 1, 2))
print("brute-force minimum on K33, b=1, a=1:", minimal_container_bruteforce(g, 1, 1))
