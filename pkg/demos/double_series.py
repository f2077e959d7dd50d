"""Summing a double series along the Cantor diagonal.

Entries x(n, k) = (-1)**k / 2**(n + k) add up to -1/3.  Flattening them as
x(1,1), x(2,1), x(1,2), x(3,1), ... gives an ordinary series, and the
rearrangement supplies an index M'(p) after which the partial sums stay
within 2**-p of the double sum.
"""

from fractions import Fraction

from constructive_measure.reals import DoubleSeq, dyadic, flat_partial_sum, pair, rearrange_double, unpair

print("first flat positions:", [unpair(m) for m in range(1, 11)])
print("pair(4, 1) =", pair(4, 1))

d = DoubleSeq(
    entry=lambda n, k: Fraction((-1) ** k, 2 ** (n + k)),
    row_modulus=lambda n: (lambda p: p),
    outer_modulus=lambda p: p,
    abs_row_modulus=lambda n: (lambda p: p),
    abs_outer_modulus=lambda p: p,
    # Closed form for the first k entries of row n; saves summing millions of terms.
    row_prefix=lambda n, k: -Fraction(1, 2**n) * (1 - Fraction(-1, 2) ** k) / 3,
)
r = rearrange_double(d)
print(f"\n{'p':>3} {'M(p)':>10}  error")
for p in (0, 4, 8, 12, 16, 20):
    m = r.modulus(p)
    err = abs(flat_partial_sum(d, m).exact + Fraction(1, 3))
    assert err <= dyadic(p)
    # The modulus is conservative: the actual error is far below 2**-p.
    print(f"{p:>3} {m:>10}  below 2**-{err.denominator.bit_length() - err.numerator.bit_length() - 1}")
