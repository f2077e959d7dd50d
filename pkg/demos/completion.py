"""From simple functions to summable sequences of them.

A representation is a sequence of simple functions whose absolute
integrals have a certified summable tail.  Here ``(1/2)**n`` times the
constant 1 sums to the constant 1, and a Cauchy sequence of embedded simple
functions converges to its obvious limit.
"""

from fractions import Fraction

from constructive_measure.complemented import GroundSet, IndicatorFn
from constructive_measure.completion import (
    IntEquality,
    compress,
    embed,
    eq_int,
    geometric,
    integral_rep,
    limit_of_cauchy,
    norm1,
)
from constructive_measure.premeasure import dirac
from constructive_measure.reals import certify_le, dyadic
from constructive_measure.simple import SimpleFunction, scalar_mul

X = GroundSet.of("abc")
D = dirac(X, "a")
one = SimpleFunction.of(D, [(1, IndicatorFn.from_bits(X, "111"))])

g = geometric(one, Fraction(1, 2))
for p in (4, 16, 32):
    print(f"integral of the geometric sum at 2**-{p}: {integral_rep(g).approx_to(p)}")
print("tail index for 2**-16:", g.tail(16))
print("after compression the first term is", compress(g, 8).term(1).render())
print("equal to 1 up to 2**-16?", eq_int(g, embed(one), 16) is not IntEquality.DISTINCT)

v = SimpleFunction.of(D, [(2, IndicatorFn.from_bits(X, "100")), (Fraction(-1, 2), IndicatorFn.from_bits(X, "011"))])


def gamma(n):
    return embed(scalar_mul(1 - Fraction(1, 2**n), v))


alpha, m2 = limit_of_cauchy(gamma, lambda p: p + 2)
print()
for p in (2, 6, 10):
    close = certify_le(norm1(alpha - embed(v)), dyadic(p), p + 2)
    print(f"p = {p:2d}: ||alpha - v|| <= 2**-{p} certified: {close}; M''(p) = {m2(p)}")
