"""Cauchy reals with an explicit modulus, series, and Cantor pairing.

A real is a sequence of rationals ``approx(n)`` together with a strictly
increasing map ``modulus`` such that ``|approx(n) - approx(m)| <= 2**-p``
whenever ``n, m >= modulus(p)``.  Every operation propagates a modulus;
nothing in this module ever searches for one.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction, "ModulatedReal"]


def dyadic(p: int) -> Fraction:
    """Return ``2**-p`` as an exact rational."""
    return Fraction(1, 1 << p) if p >= 0 else Fraction(1 << -p)


def _bits_above(q: Fraction) -> int:
    """Smallest k >= 0 with ``|q| <= 2**k``."""
    q = abs(q)
    k = 0
    while q > (1 << k):
        k += 1
    return k


@dataclass(frozen=True, eq=False)
class ModulatedReal:
    """A real number given by a rational Cauchy sequence and its modulus.

    ``exact`` is set when the value is known to be a rational; arithmetic on
    exact operands stays exact, which keeps finite computations cheap.
    """

    approx: Callable[[int], Fraction]
    modulus: Callable[[int], int]
    exact: Optional[Fraction] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def approx_to(self, p: int) -> Fraction:
        """A rational within ``2**-p`` of the limit."""
        if self.exact is not None:
            return self.exact
        try:
            return self._cache[p]
        except KeyError:
            value = Fraction(self.approx(self.modulus(p)))
            self._cache[p] = value
            return value

    def __add__(self, other: Number) -> "ModulatedReal":
        return add(self, as_real(other))

    __radd__ = __add__

    def __neg__(self) -> "ModulatedReal":
        return neg(self)

    def __sub__(self, other: Number) -> "ModulatedReal":
        return add(self, neg(as_real(other)))

    def __rsub__(self, other: Number) -> "ModulatedReal":
        return add(as_real(other), neg(self))

    def __mul__(self, other: Number) -> "ModulatedReal":
        return mul(self, as_real(other))

    __rmul__ = __mul__

    def __abs__(self) -> "ModulatedReal":
        return real_abs(self)

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"ModulatedReal(exact={self.exact})"
        return f"ModulatedReal(~{float(self.approx_to(20)):.6g})"


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    WITHIN = "within"


def real_from_rational(q: Union[int, Fraction]) -> ModulatedReal:
    q = Fraction(q)
    return ModulatedReal(lambda n: q, lambda p: p + 1, exact=q)


def as_real(x: Number) -> ModulatedReal:
    if isinstance(x, ModulatedReal):
        return x
    return real_from_rational(x)


def approx_to(x: Number, p: int) -> Fraction:
    return as_real(x).approx_to(p)


def add(x: ModulatedReal, y: ModulatedReal) -> ModulatedReal:
    if x.exact is not None and y.exact is not None:
        return real_from_rational(x.exact + y.exact)
    return ModulatedReal(
        lambda n: x.approx(n) + y.approx(n),
        lambda p: max(x.modulus(p + 1), y.modulus(p + 1)),
    )


def neg(x: ModulatedReal) -> ModulatedReal:
    if x.exact is not None:
        return real_from_rational(-x.exact)
    return ModulatedReal(lambda n: -x.approx(n), x.modulus)


def mul(x: ModulatedReal, y: ModulatedReal) -> ModulatedReal:
    if x.exact is not None and y.exact is not None:
        return real_from_rational(x.exact * y.exact)
    # Past modulus(0) every term lies within 1 of approx_to(0), so both
    # sequences are bounded by 2**k from there on.
    k = max(_bits_above(abs(x.approx_to(0)) + 1), _bits_above(abs(y.approx_to(0)) + 1))
    floor = max(x.modulus(0), y.modulus(0))
    return ModulatedReal(
        lambda n: x.approx(n) * y.approx(n),
        lambda p: max(x.modulus(p + 1 + k), y.modulus(p + 1 + k), floor + p + 1),
    )


def real_abs(x: ModulatedReal) -> ModulatedReal:
    if x.exact is not None:
        return real_from_rational(abs(x.exact))
    return ModulatedReal(lambda n: abs(x.approx(n)), x.modulus)


def real_min(x: ModulatedReal, y: ModulatedReal) -> ModulatedReal:
    if x.exact is not None and y.exact is not None:
        return real_from_rational(min(x.exact, y.exact))
    return ModulatedReal(
        lambda n: min(x.approx(n), y.approx(n)),
        lambda p: max(x.modulus(p), y.modulus(p)),
    )


def real_max(x: ModulatedReal, y: ModulatedReal) -> ModulatedReal:
    if x.exact is not None and y.exact is not None:
        return real_from_rational(max(x.exact, y.exact))
    return ModulatedReal(
        lambda n: max(x.approx(n), y.approx(n)),
        lambda p: max(x.modulus(p), y.modulus(p)),
    )


def _rational_sum(qs) -> Fraction:
    """Exact sum over a common denominator (one normalization at the end)."""
    qs = [Fraction(q) for q in qs]
    den = math.lcm(*(q.denominator for q in qs)) if qs else 1
    return Fraction(sum(q.numerator * (den // q.denominator) for q in qs), den)


def real_sum(xs: Sequence[Number]) -> ModulatedReal:
    """Sum of finitely many reals with a single logarithmic modulus shift."""
    reals = [as_real(x) for x in xs]
    exact = _rational_sum(r.exact for r in reals if r.exact is not None)
    rest = [r for r in reals if r.exact is None]
    if not rest:
        return real_from_rational(exact)
    if len(rest) == 1 and exact == 0:
        return rest[0]
    k = _bits_above(Fraction(len(rest)))
    return ModulatedReal(
        lambda n: exact + sum((r.approx(n) for r in rest), Fraction(0)),
        lambda p: max(r.modulus(p + k) for r in rest),
    )


def compare_at(x: Number, y: Number, p: int) -> Ordering:
    """Decide ``x < y``, ``x > y`` or ``|x - y| <= 2**-p``."""
    x, y = as_real(x), as_real(y)
    if x.exact is not None and y.exact is not None:
        d = x.exact - y.exact
        if d > dyadic(p):
            return Ordering.GREATER
        if d < -dyadic(p):
            return Ordering.LESS
        return Ordering.WITHIN
    d = x.approx_to(p + 2) - y.approx_to(p + 2)
    if d > dyadic(p + 1):
        return Ordering.GREATER
    if d < -dyadic(p + 1):
        return Ordering.LESS
    return Ordering.WITHIN


def equal_at(x: Number, y: Number, p: int) -> bool:
    """Bounded equality ``|a_{M(p+1)} - b_{N(p+1)}| <= 2**-p``."""
    return abs(approx_to(x, p + 1) - approx_to(y, p + 1)) <= dyadic(p)


def certify_le(x: Number, bound: Union[int, Fraction], p: int) -> bool:
    """True only if ``x <= bound`` is certified by a ``2**-p`` approximation."""
    return approx_to(x, p) + dyadic(p) <= bound


def check_modulus(x: ModulatedReal, precisions: Sequence[int], offsets: Sequence[int] = (0, 1, 7, 31)) -> list:
    """Return sampled violations of the modulus contract (empty when sound)."""
    bad = []
    for p in precisions:
        base = x.modulus(p)
        if p > 0 and base <= x.modulus(p - 1):
            bad.append(("not-increasing", p))
        for a in offsets:
            for b in offsets:
                if abs(x.approx(base + a) - x.approx(base + b)) > dyadic(p):
                    bad.append(("cauchy", p, base + a, base + b))
    return bad


@dataclass(frozen=True)
class ModulatedRealSeq:
    """A sequence of reals with a Cauchy modulus ``|x_n - x_m| <= 2**-p``."""

    term: Callable[[int], ModulatedReal]
    cauchy_modulus: Callable[[int], int]


def limit(seq: ModulatedRealSeq) -> ModulatedReal:
    """Diagonal limit of a modulated Cauchy sequence of reals."""

    def approx(n: int) -> Fraction:
        return as_real(seq.term(seq.cauchy_modulus(n))).approx_to(n)

    return ModulatedReal(approx, lambda p: p + 2)


class _PrefixSums:
    """Thread-safe running partial sums of a series of reals."""

    def __init__(self, terms: Callable[[int], Number]):
        self._terms = terms
        self._exact = [Fraction(0)]
        self._inexact: list[list[ModulatedReal]] = [[]]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> ModulatedReal:
        with self._lock:
            while len(self._exact) <= n:
                k = len(self._exact)
                t = as_real(self._terms(k))
                if t.exact is not None:
                    self._exact.append(self._exact[-1] + t.exact)
                    self._inexact.append(self._inexact[-1])
                else:
                    self._exact.append(self._exact[-1])
                    self._inexact.append(self._inexact[-1] + [t])
            exact, inexact = self._exact[n], self._inexact[n]
        return real_sum([exact, *inexact])


def sum_series(terms: Callable[[int], Number], abs_tail_modulus: Callable[[int], int]) -> ModulatedReal:
    """Sum ``terms(1) + terms(2) + ...`` given a tail certificate.

    ``abs_tail_modulus(p)`` must be an index N with
    ``sum_{n > N} |terms(n)| <= 2**-p``.
    """
    partial = _PrefixSums(terms)

    def approx(k: int) -> Fraction:
        return partial(abs_tail_modulus(k + 1)).approx_to(k + 1)

    return ModulatedReal(approx, lambda p: p + 1)


def partial_sum(terms: Callable[[int], Number], n: int) -> ModulatedReal:
    return _PrefixSums(terms)(n)


# -- Cantor pairing ---------------------------------------------------------


def cantor_pair(x: int, y: int) -> int:
    """0-based Cantor pairing ``(x+y)(x+y+1)/2 + y``."""
    if x < 0 or y < 0:
        raise ValueError("cantor_pair takes non-negative integers")
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(m: int) -> tuple[int, int]:
    if m < 0:
        raise ValueError("cantor_unpair takes a non-negative integer")
    w = (math.isqrt(8 * m + 1) - 1) // 2
    y = m - w * (w + 1) // 2
    return w - y, y


def pair(n: int, k: int) -> int:
    """1-based pairing: ``(1,1) -> 1, (2,1) -> 2, (1,2) -> 3, ...``."""
    if n < 1 or k < 1:
        raise ValueError("pair takes positive integers")
    return cantor_pair(n - 1, k - 1) + 1


def unpair(m: int) -> tuple[int, int]:
    if m < 1:
        raise ValueError("unpair takes a positive integer")
    x, y = cantor_unpair(m - 1)
    return x + 1, y + 1


def diagonal_bound(n: int) -> int:
    """``pair(n, n)``: every pair with both coordinates <= n pairs to at most this."""
    return pair(n, n)


def row_prefix_length(n: int, big_n: int) -> int:
    """Largest k with ``pair(n, k) <= big_n`` (0 if none)."""
    if pair(n, 1) > big_n:
        return 0
    # pair(n, k) >= k(k+1)/2, which caps the search range.
    lo, hi = 1, min(big_n, math.isqrt(2 * big_n) + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pair(n, mid) <= big_n:
            lo = mid
        else:
            hi = mid - 1
    return lo


# -- double series ----------------------------------------------------------


@dataclass(frozen=True)
class DoubleSeq:
    """A double series ``sum_n sum_k entry(n, k)`` with convergence moduli.

    ``row_modulus(n)(p)`` bounds the row tail ``|l_n - sum_{k<=N} x_nk|`` by
    ``2**-p`` for ``N >= row_modulus(n)(p)``; ``outer_modulus`` does the same
    for the sums of row limits.  For signed data the ``abs_*`` moduli describe
    the series of absolute values.  ``row_prefix(n, K)`` may supply exact
    finite row sums, which only speeds up ``flat_partial_sum``.
    """

    entry: Callable[[int, int], Number]
    row_modulus: Callable[[int], Callable[[int], int]]
    outer_modulus: Callable[[int], int]
    abs_row_modulus: Optional[Callable[[int], Callable[[int], int]]] = None
    abs_outer_modulus: Optional[Callable[[int], int]] = None
    nonnegative: bool = False
    row_prefix: Optional[Callable[[int, int], Number]] = None


@dataclass(frozen=True)
class Rearrangement:
    flat: Callable[[int], Number]
    modulus: Callable[[int], int]
    abs_modulus: Callable[[int], int]


def nonnegative_flat_modulus(
    row_modulus: Callable[[int], Callable[[int], int]], outer_modulus: Callable[[int], int]
) -> Callable[[int], int]:
    """Modulus of the flattened series for non-negative entries."""

    def modulus(p: int) -> int:
        big = outer_modulus(p + 1)
        rows = max((row_modulus(n)(big + p + 1) for n in range(1, big + 1)), default=0)
        return diagonal_bound(max(big, rows, 1))

    return modulus


def signed_flat_modulus(
    row_modulus: Callable[[int], Callable[[int], int]],
    outer_modulus: Callable[[int], int],
    abs_flat_modulus: Callable[[int], int],
) -> Callable[[int], int]:
    """Modulus of the flattened series for signed entries.

    The outer modulus is first raised to dominate the modulus of the
    flattened series of absolute values.
    """

    def big_m(p: int) -> int:
        return max(outer_modulus(p), abs_flat_modulus(p))

    def modulus(p: int) -> int:
        big = big_m(p + 2)
        rows = max((row_modulus(n)(big + p + 2) for n in range(1, big + 1)), default=0)
        return diagonal_bound(max(big, rows, 1))

    return modulus


def rearrange_double(d: DoubleSeq) -> Rearrangement:
    """Flatten a double series along the Cantor diagonal with a modulus."""

    def flat(m: int) -> Number:
        n, k = unpair(m)
        return d.entry(n, k)

    if d.nonnegative:
        modulus = nonnegative_flat_modulus(d.row_modulus, d.outer_modulus)
        return Rearrangement(flat, modulus, modulus)
    if d.abs_row_modulus is None or d.abs_outer_modulus is None:
        raise ValueError("signed double series need absolute-convergence moduli")
    abs_modulus = nonnegative_flat_modulus(d.abs_row_modulus, d.abs_outer_modulus)
    return Rearrangement(flat, signed_flat_modulus(d.row_modulus, d.outer_modulus, abs_modulus), abs_modulus)


def flat_partial_sum(d: DoubleSeq, big_n: int) -> ModulatedReal:
    """``sum_{m <= N} flat(m)`` computed row by row (a finite regrouping)."""
    parts: list[Number] = []
    n = 1
    while pair(n, 1) <= big_n:
        k_max = row_prefix_length(n, big_n)
        if d.row_prefix is not None:
            parts.append(d.row_prefix(n, k_max))
        else:
            parts.extend(d.entry(n, k) for k in range(1, k_max + 1))
        n += 1
    return real_sum(parts)


@dataclass(frozen=True)
class UnflattenResult:
    row_sums: list
    double_sum: ModulatedReal
    flat_sum: ModulatedReal
    agree: bool


def unflatten_check(
    flat: Callable[[int], Number], abs_modulus: Callable[[int], int], rows: int, p: int
) -> UnflattenResult:
    """Distribute an absolutely convergent series over rows and compare sums.

    Row ``n`` holds ``flat(pair(n, k))``.  Since ``pair(n, k) >= k`` and
    ``pair(n, k) >= n``, the absolute tail modulus of the flat series also
    certifies every row and the series of row sums.
    """

    def row(n: int) -> ModulatedReal:
        return sum_series(lambda k: flat(pair(n, k)), abs_modulus)

    row_cache: dict[int, ModulatedReal] = {}
    lock = threading.Lock()

    def cached_row(n: int) -> ModulatedReal:
        with lock:
            if n not in row_cache:
                row_cache[n] = row(n)
            return row_cache[n]

    double_sum = sum_series(cached_row, abs_modulus)
    flat_sum = sum_series(flat, abs_modulus)
    agree = compare_at(double_sum, flat_sum, p) is Ordering.WITHIN
    return UnflattenResult([cached_row(n) for n in range(1, rows + 1)], double_sum, flat_sum, agree)
