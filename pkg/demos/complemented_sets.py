"""Complemented subsets on a three-point set.

A complemented subset is a pair (positive part, negative part) of disjoint
subsets.  Points in neither part are simply outside its domain, so meets and
joins shrink the domain instead of forcing every point to one side.
"""

from constructive_measure.complemented import (
    GroundSet,
    characteristic,
    complement,
    complemented,
    join,
    law_violations,
    meet,
    minus,
)

X = GroundSet.of("abc")
A = complemented(X, ["a"], ["b"])
B = complemented(X, ["a", "c"], [])

print("A            =", A)
print("B            =", B)
print("A meet B     =", meet(A, B))
print("A join B     =", join(A, B))
print("-A           =", complement(A))
print("B - A        =", minus(B, A))

chi = characteristic(meet(A, B))
print("chi(A meet B) is defined at", [x for x in X if chi.defined_at(x)], "with values", [str(chi(x)) for x in X if chi.defined_at(x)])

for n in range(1, 5):
    ground = GroundSet.of("abcd"[:n])
    bad = law_violations(ground)
    print(f"|X| = {n}: {3 ** n:2d} complemented subsets, {len(bad)} law violations")
