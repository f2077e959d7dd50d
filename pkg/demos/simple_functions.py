"""Simple functions and their integral over two small pre-measure spaces.

The Dirac space at ``a`` only sees the value at ``a``.  The weighted space
gives ``a``, ``b`` and ``c`` masses 1, 1/2 and 3.  Bit strings list the
ground set in order, so ``"110"`` is the indicator of {a, b}.
"""

from fractions import Fraction

from constructive_measure.complemented import GroundSet, IndicatorFn
from constructive_measure.premeasure import check_pms, dirac, weighted_counting
from constructive_measure.simple import SimpleFunction, disjrep, integral, phi_n, sf_equal

X = GroundSet.of("abc")
D = dirac(X, "a")
W = weighted_counting(X, {"a": 1, "b": Fraction(1, 2), "c": 3})


def sf(space, *terms):
    return SimpleFunction.of(space, [(Fraction(c), IndicatorFn.from_bits(X, bits)) for c, bits in terms])


for space in (D, W):
    report = check_pms(space)
    print(f"{space.name}: pre-measure axioms {'hold' if report.ok else 'FAIL'}")

v = sf(W, (2, "110"), (-1, "011"))
print("\nv =", v.render())
print("values:", {x: str(v(x)) for x in X})
print("integral in W:", integral(v))
print("integral in D:", integral(sf(D, (2, "110"), (-1, "011"))))

d = disjrep(v)
print("\ndisjoint form:", d.render())
print("same function:", sf_equal(v, d), "| same integral:", integral(d) == integral(v))

# phi_N picks out where v is at least 1/N.  Equal inputs give the same answer.
u = sf(W, (0, "100"), ("3/5", "011"))
for n in (1, 2):
    j, k = phi_n(u, n), phi_n(disjrep(u), n)
    print(f"\nphi_{n}(u) = {W.family(j)}   phi_{n}(disjrep(u)) = {W.family(k)}")
# Testing every cell of the disjoint form (the literal branch rule) breaks this.
j, k = phi_n(u, 1, literal=True), phi_n(disjrep(u), 1, literal=True)
print(f"literal rule with N = 1: {W.family(j)} vs {W.family(k)}")
