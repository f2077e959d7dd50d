"""Completion of simple functions: absolutely summable sequences.

A representation is a sequence ``alpha(1), alpha(2), ...`` of simple
functions together with a tail certificate ``tail(p)``: an index N with
``sum_{n > N} integral |alpha(n)| <= 2**-p``.  It stands for the function
``g(x) = sum_n f_{alpha(n)}(x)`` on the points where the series of
absolute values converges, and its integral is ``sum_n integral(alpha(n))``.
Two representations are identified when the 1-norm of their difference
vanishes.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Optional, Sequence

from .complemented import PartialFn
from .premeasure import PreMeasureSpace
from .reals import (
    ModulatedReal,
    Ordering,
    compare_at,
    dyadic,
    nonnegative_flat_modulus,
    real_from_rational,
    sum_series,
    unpair,
)
from .report import CheckConfig, Report, verdict
from .simple import (
    DomainError,
    SimpleFunction,
    abs_sf,
    add,
    compact,
    disjrep,
    integral,
    meet_one,
    random_sf,
    scalar_mul,
    zero_on,
)


class MissingCertificate(ValueError):
    """No pointwise convergence certificate is available at this point."""


class UnsoundModulus(ValueError):
    """A supplied Cauchy modulus failed a spot check."""


class _Memo:
    """Thread-safe memo for a function of a positive integer."""

    def __init__(self, fn: Callable[[int], object]):
        self._fn = fn
        self._values: dict = {}
        self._lock = threading.Lock()

    def __call__(self, n: int):
        with self._lock:
            if n in self._values:
                return self._values[n]
        value = self._fn(n)
        with self._lock:
            return self._values.setdefault(n, value)


@dataclass(frozen=True, eq=False)
class Representation:
    """An absolutely summable sequence of simple functions.

    ``support`` is set when ``alpha(n)`` is a zero function for every
    ``n > support``.  ``domain`` is the intersection of the domains of all
    terms.  ``pointwise_tail(x, p)`` (x a ground position) returns an index
    N with ``sum_{n > N} |f_{alpha(n)}(x)| <= 2**-p`` or raises
    :class:`MissingCertificate`.
    """

    space: PreMeasureSpace
    term_fn: Callable[[int], SimpleFunction]
    tail_modulus: Callable[[int], int]
    domain: int
    support: Optional[int] = None
    pointwise_tail: Optional[Callable[[int, int], int]] = None

    def __post_init__(self):
        object.__setattr__(self, "term_fn", _Memo(self.term_fn))

    def term(self, n: int) -> SimpleFunction:
        if n < 1:
            raise IndexError("representations are indexed from 1")
        return self.term_fn(n)

    def tail(self, p: int) -> int:
        """Tail index for precision ``p``; never beyond the support."""
        if self.support is not None:
            return self.support
        return self.tail_modulus(p)

    def pointwise(self, x: int, p: int) -> int:
        if self.support is not None:
            return self.support
        if self.pointwise_tail is None:
            raise MissingCertificate(f"no pointwise certificate at {self.space.ground.elements[x]!r}")
        return self.pointwise_tail(x, p)

    def terms(self, n: int) -> list:
        return [self.term(k) for k in range(1, n + 1)]

    def __add__(self, other: "Representation") -> "Representation":
        return rep_add(self, other)

    def __neg__(self) -> "Representation":
        return rep_scale(-1, self)

    def __sub__(self, other: "Representation") -> "Representation":
        return rep_add(self, rep_scale(-1, other))

    def __rmul__(self, a) -> "Representation":
        return rep_scale(a, self)


# -- constructors -----------------------------------------------------------


def finite(space: PreMeasureSpace, sfs: Sequence[SimpleFunction]) -> Representation:
    """``(v_1, ..., v_N, 0, 0, ...)``; the zeros live on the domain of ``v_N``."""
    sfs = list(sfs) or [SimpleFunction(space, ())]
    n = len(sfs)
    pad = zero_on(sfs[-1])
    dom = reduce(lambda d, v: d & v.domain, sfs, space.ground.full)
    return Representation(
        space,
        lambda k: sfs[k - 1] if k <= n else pad,
        lambda p: n + p,
        dom,
        support=n,
    )


def embed(v: SimpleFunction) -> Representation:
    return finite(v.space, [v])


def _geometric_index(c: Fraction, r: Fraction, p: int) -> int:
    """Least N >= 0 with ``c * r**(N+1) / (1 - r) <= 2**-p``."""
    n, term = 0, c * r / (1 - r)
    while term > dyadic(p):
        n += 1
        term *= r
    return n


def geometric(base: SimpleFunction, ratio, first: int = 1) -> Representation:
    """``alpha(n) = ratio**(n + first - 1) * base`` for ``|ratio| < 1``.

    ``first`` is the exponent of the first term; the tail certificates are
    those of ``first = 1``, which stay valid for larger ``first``.
    """
    r = Fraction(ratio)
    if not abs(r) < 1:
        raise ValueError("geometric representations need |ratio| < 1")
    if first < 1:
        raise ValueError("the first exponent must be at least 1")
    S = base.space
    mass = integral(abs_sf(base))
    ar = abs(r)
    if r == 0:
        return finite(S, [zero_on(base)])
    shift = first - 1

    def pointwise(x: int, p: int) -> int:
        return _geometric_index(abs(base.function.values[x]), ar, p) + p

    return Representation(
        S,
        lambda n: scalar_mul(r ** (n + shift), base),
        lambda p: _geometric_index(mass, ar, p) + p,
        base.domain,
        pointwise_tail=pointwise,
    )


# -- operations -------------------------------------------------------------


def _both(a: Representation, b: Representation) -> None:
    if a.space is not b.space:
        raise ValueError("representations over different spaces")


def rep_add(a: Representation, b: Representation) -> Representation:
    """Interleave: ``(a(1), b(1), a(2), b(2), ...)``."""
    _both(a, b)

    def term(n: int) -> SimpleFunction:
        return a.term((n + 1) // 2) if n % 2 else b.term(n // 2)

    support = 2 * max(a.support, b.support) if a.support is not None and b.support is not None else None
    pointwise = None
    if support is None:

        def pointwise(x: int, p: int) -> int:
            return 2 * max(a.pointwise(x, p + 1), b.pointwise(x, p + 1))

    return Representation(
        a.space,
        term,
        lambda p: 2 * max(a.tail(p + 1), b.tail(p + 1)),
        a.domain & b.domain,
        support,
        pointwise,
    )


def rep_scale(c, a: Representation) -> Representation:
    c = Fraction(c)
    shift = 0
    while abs(c) > (1 << shift):
        shift += 1
    pointwise = None
    if a.support is None:

        def pointwise(x: int, p: int) -> int:
            return a.pointwise(x, p + shift)

    return Representation(
        a.space,
        lambda n: scalar_mul(c, a.term(n)),
        lambda p: a.tail(p + shift),
        a.domain,
        a.support,
        pointwise,
    )


class _PartialSums:
    """Compacted partial sums ``S_n = a(1) + ... + a(n)`` of a representation."""

    def __init__(self, a: Representation):
        self._a = a
        self._sums: list = [None]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> SimpleFunction:
        with self._lock:
            while len(self._sums) <= n:
                k = len(self._sums)
                t = self._a.term(k)
                prev = self._sums[-1]
                if prev is None:
                    self._sums.append(compact(t))
                elif all(c == 0 for c, _ in t.terms) and (t.domain & prev.domain) == prev.domain:
                    self._sums.append(prev)
                else:
                    self._sums.append(compact(add(prev, t)))
            return self._sums[n]


def _lattice_rep(a: Representation, op: Callable[[SimpleFunction], SimpleFunction]) -> Representation:
    """Blocks ``(op(S_n) - op(S_{n-1}), a(n), -a(n))`` with ``op(S_0) := 0``.

    ``op`` is 1-Lipschitz, so each block has integral-norm at most
    ``3 integral |a(n)|``.
    """
    sums = _PartialSums(a)
    images = _Memo(lambda n: compact(op(sums(n))))

    def term(m: int) -> SimpleFunction:
        n, r = (m - 1) // 3 + 1, (m - 1) % 3
        if r == 1:
            return a.term(n)
        if r == 2:
            return scalar_mul(-1, a.term(n))
        if n == 1:
            return images(1)
        cur, prev = images(n), images(n - 1)
        if sums(n) is sums(n - 1):
            return zero_on(cur)
        return add(cur, scalar_mul(-1, prev))

    support = 3 * a.support if a.support is not None else None
    pointwise = None
    if support is None:

        def pointwise(x: int, p: int) -> int:
            return 3 * a.pointwise(x, p + 2) + 3

    return Representation(a.space, term, lambda p: 3 * a.tail(p + 2) + 3, a.domain, support, pointwise)


def rep_abs(a: Representation) -> Representation:
    return _lattice_rep(a, abs_sf)


def rep_meet_one(a: Representation) -> Representation:
    return _lattice_rep(a, meet_one)


def rep_join(a: Representation, b: Representation) -> Representation:
    """``b + (a - b + |a - b|) / 2``."""
    d = a - b
    return rep_add(b, rep_scale(Fraction(1, 2), rep_add(d, rep_abs(d))))


def rep_meet(a: Representation, b: Representation) -> Representation:
    return -rep_join(-a, -b)


def rep_min_const(a: Representation, n) -> Representation:
    """``n * ((a / n) meet 1)``, i.e. ``a`` truncated at height ``n``."""
    n = Fraction(n)
    return rep_scale(n, rep_meet_one(rep_scale(1 / n, a)))


# -- integral, evaluation, norm ---------------------------------------------


def integral_rep(a: Representation) -> ModulatedReal:
    if a.support is not None:
        return real_from_rational(sum((integral(a.term(n)) for n in range(1, a.support + 1)), Fraction(0)))
    return sum_series(lambda n: integral(a.term(n)), a.tail_modulus)


def eval_rep(a: Representation, x) -> ModulatedReal:
    """``g_alpha(x)``; needs ``x`` in every term's domain and a pointwise certificate."""
    k = a.space.ground.index(x)
    if not a.domain >> k & 1:
        raise DomainError(f"{x!r} is outside the domain of the representation")
    if a.support is not None:
        return real_from_rational(sum((a.term(n).function.values[k] for n in range(1, a.support + 1)), Fraction(0)))
    cert = a.pointwise_tail
    if cert is None:
        raise MissingCertificate(f"no pointwise certificate at {x!r}")
    return sum_series(lambda n: a.term(n).function.values[k], lambda p: cert(k, p))


def finite_function(a: Representation) -> PartialFn:
    """``g_alpha`` as an exact partial function (finite support only)."""
    if a.support is None:
        raise ValueError("finite_function needs a finitely supported representation")
    fns = [a.term(n).function for n in range(1, a.support + 1)]
    return reduce(lambda f, g: f + g, fns).restrict(a.domain)


def norm1(a: Representation) -> ModulatedReal:
    return integral_rep(rep_abs(a))


class IntEquality(enum.Enum):
    EQUAL = "equal"
    WITHIN = "within"
    DISTINCT = "distinct"


def eq_int(a: Representation, b: Representation, p: int) -> IntEquality:
    """``EQUAL`` when the distance is exactly 0, ``WITHIN`` when it is at most ``2**-p``."""
    d = norm1(a - b)
    if d.exact is not None:
        if d.exact == 0:
            return IntEquality.EQUAL
        return IntEquality.WITHIN if d.exact <= dyadic(p) else IntEquality.DISTINCT
    return IntEquality.DISTINCT if compare_at(d, 0, p) is Ordering.GREATER else IntEquality.WITHIN


# -- compression, sums of series, limits ------------------------------------


def compress(a: Representation, n: int) -> Representation:
    """Fold the first ``N = tail(n+1)`` terms into one.

    The result has the same integral and ``sum_k integral |beta(k)| <=
    integral |alpha| + 2**-n``.
    """
    big = a.tail(n + 1)
    head = _Memo(lambda _: compact(reduce(add, a.terms(big))))

    def term(k: int) -> SimpleFunction:
        return head(0) if k == 1 else a.term(big + k - 1)

    support = max(1, a.support - big + 1) if a.support is not None else None
    pointwise = None
    if support is None:

        def pointwise(x: int, p: int) -> int:
            return a.pointwise(x, p)

    return Representation(a.space, term, a.tail, a.domain, support, pointwise)


def lebesgue_sum(
    gamma: Callable[[int], Representation],
    outer_tail: Callable[[int], int],
    *,
    domain: Optional[int] = None,
    pointwise_outer: Optional[Callable[[int, int], int]] = None,
) -> Representation:
    """One representation for ``sum_n gamma(n)``.

    ``outer_tail(p)`` must be an index N with ``sum_{n > N} norm1(gamma(n))
    <= 2**-p``.  Each ``gamma(n)`` is compressed at precision ``n`` and the
    double sequence is flattened along the Cantor diagonal.

    ``domain`` defaults to the domain of ``gamma(1)``; pass it when later
    terms live on smaller domains.  ``pointwise_outer(x, p)``, if given,
    bounds ``sum_{n > N} sum_k |f_{gamma(n)(k)}(x)|`` and enables pointwise
    evaluation.
    """
    betas = _Memo(lambda n: compress(gamma(n), n))
    g1 = gamma(1)
    S = g1.space

    def term(m: int) -> SimpleFunction:
        n, k = unpair(m)
        return betas(n).term(k)

    def outer(p: int) -> int:
        return max(outer_tail(p + 1), p + 1)

    tail = nonnegative_flat_modulus(lambda n: betas(n).tail, outer)
    pointwise = None
    if pointwise_outer is not None:

        def pointwise(x: int, p: int) -> int:
            rows = lambda n: (lambda q: betas(n).pointwise(x, q))  # noqa: E731
            return nonnegative_flat_modulus(rows, lambda q: pointwise_outer(x, q))(p)

    return Representation(S, term, tail, g1.domain if domain is None else domain, None, pointwise)


def limit_of_cauchy(
    gamma: Callable[[int], Representation],
    modulus: Callable[[int], int],
    *,
    spot_check: Sequence[int] = (0, 1, 2),
    domain: Optional[int] = None,
) -> tuple:
    """Limit of a 1-norm Cauchy sequence of representations.

    ``modulus(p)`` must make ``norm1(gamma(n) - gamma(m)) <= 2**-p`` for
    ``n, m >= modulus(p)``; it is spot-checked at the precisions in
    ``spot_check``.  Returns ``(alpha, m2)`` where
    ``norm1(alpha - gamma(m)) <= 2**-p`` for all ``m >= m2(p)``.
    """
    for p in spot_check:
        n = modulus(p)
        for m in (n, n + 1, n + 2):
            d = norm1(gamma(n) - gamma(m))
            if compare_at(d, dyadic(p), p + 4) is Ordering.GREATER:
                raise UnsoundModulus(f"norm1(gamma({n}) - gamma({m})) exceeds 2**-{p}")

    def delta(n: int) -> Representation:
        if n == 1:
            return gamma(modulus(1))
        return gamma(modulus(n)) - gamma(modulus(n - 1))

    # norm1(delta(n)) <= 2**-(n-1) for n >= 2.
    def outer_tail(p: int) -> int:
        return p + 1

    alpha = lebesgue_sum(delta, outer_tail, domain=domain)

    def m_prime(p: int) -> int:
        return max(outer_tail(p + 1), p + 1)

    def m2(p: int) -> int:
        return max(m_prime(p + 1), modulus(p + 1))

    return alpha, m2


def compression_bound_holds(a: Representation, n: int, p: int) -> bool:
    """``sum_k integral |beta(k)| <= norm1(alpha) + 2**-n`` up to ``2**-p``."""
    b = compress(a, n)
    lhs = _abs_mass(b)
    rhs = norm1(a) + dyadic(n)
    return compare_at(lhs, rhs, p) is not Ordering.GREATER


def _abs_mass(a: Representation) -> ModulatedReal:
    """``sum_n integral |alpha(n)|``."""
    if a.support is not None:
        return real_from_rational(sum((integral(abs_sf(a.term(n))) for n in range(1, a.support + 1)), Fraction(0)))
    return sum_series(lambda n: integral(abs_sf(a.term(n))), a.tail_modulus)


abs_mass = _abs_mass


# -- checks -----------------------------------------------------------------


def random_finite_rep(space: PreMeasureSpace, rng, max_len: int = 3, config: CheckConfig = CheckConfig()) -> Representation:
    n = rng.randint(1, max_len)
    return finite(space, [random_sf(space, rng, 2, config.coefficients) for _ in range(n)])


def check_pis_completion(space: PreMeasureSpace, config: CheckConfig = CheckConfig()) -> Report:
    """Pre-integration axioms and companion lemmas for the completion.

    Everything except PIS2 runs on finitely supported representations and
    is exact; the geometric and limit checks use ``config.precision``.
    """
    S = space
    rng = config.rng("completion")
    p = config.precision
    samples = max(1, config.samples // 4)
    entries = []
    scalars = [Fraction(c) for c in config.coefficients] + [Fraction(1, 2)]

    bad = []
    for _ in range(samples):
        a, b = random_finite_rep(S, rng), random_finite_rep(S, rng)
        c, d = rng.choice(scalars), rng.choice(scalars)
        ga, gb = finite_function(a), finite_function(b)
        if finite_function(a + b) != ga + gb:
            bad.append({"law": "g(a + b) = g(a) + g(b)"})
        if finite_function(c * a) != ga.scale(c):
            bad.append({"law": "g(c a) = c g(a)"})
        if finite_function(rep_abs(a)) != abs(ga):
            bad.append({"law": "g(|a|) = |g(a)|"})
        if finite_function(rep_meet_one(a)) != ga.map(lambda t: min(t, Fraction(1))):
            bad.append({"law": "g(a meet 1) = g(a) meet 1"})
        lhs = integral_rep(c * a + d * b).exact
        if lhs != c * integral_rep(a).exact + d * integral_rep(b).exact:
            bad.append({"law": "linearity of the integral"})
        v, w = random_sf(S, rng, 2), random_sf(S, rng, 2)
        if eq_int(embed(add(v, w)), embed(v) + embed(w), p) is not IntEquality.EQUAL:
            bad.append({"law": "embed is additive", "v": v.render(), "w": w.render()})
    entries.append(verdict("PIS1", bad, sampled=True, detail={"samples": samples}))

    bad = []
    count = 0
    for _ in range(20 * samples):
        if count >= samples:
            break
        a = random_finite_rep(S, rng)
        gammas = [finite(S, [_nonneg(S, rng)]) for _ in range(rng.randint(0, 3))]
        total = sum((integral_rep(g).exact for g in gammas), Fraction(0))
        if not total < integral_rep(a).exact:
            continue
        count += 1
        ga = finite_function(a)
        gs = [finite_function(g) for g in gammas]
        dom = reduce(lambda d, f: d & f.domain, gs, ga.domain)
        if not any(
            sum((f.values[k] for f in gs), Fraction(0)) < ga.values[k] for k in range(len(S.ground)) if dom >> k & 1
        ):
            bad.append({"alpha": [t.render() for t in a.terms(a.support)]})
    entries.append(verdict("PIS2", bad, sampled=True, detail={"instances": count}))

    positive = [i for i in S.index if S.mu(i) > 0]
    bad = []
    for i in positive[:1]:
        if integral_rep(embed(SimpleFunction.of(S, [(1 / S.mu(i), i)]))).exact != 1:
            bad.append({"i": S.render(i)})
    if not positive:
        bad.append({"law": "no index with positive measure"})
    entries.append(verdict("PIS3", bad))

    bad = []
    for _ in range(max(1, samples // 5)):
        a = random_finite_rep(S, rng, 2)
        total = compact(reduce(add, a.terms(a.support)))
        top = max((abs(c) for c, _ in total.terms), default=Fraction(0))
        d = disjrep(total).terms
        for m in range(1, config.max_m + 1, 7):
            truncated = integral_rep(rep_min_const(a, m)).exact
            if m > top and truncated != integral_rep(a).exact:
                bad.append({"law": "integral(a meet n) = integral(a) for large n", "n": m})
            small = integral_rep(rep_meet_one(rep_scale(m, rep_abs(a)))).exact / m
            exact = sum((min(m * abs(c), Fraction(1)) * S.mu(i) for c, i in d), Fraction(0)) / m
            if small != exact or small > sum((S.mu(i) for _, i in d), Fraction(0)) / m:
                bad.append({"law": "integral(|a| meet 1/n) decays like 1/n", "n": m})
    entries.append(verdict("PIS4", bad, detail={"max_m": config.max_m}))

    bad = []
    for _ in range(samples):
        a, b = random_finite_rep(S, rng), random_finite_rep(S, rng)
        ga, gb = finite_function(a), finite_function(b)
        ia, ib = integral_rep(a).exact, integral_rep(b).exact
        if all(t >= 0 for _, t in ga.items()) and ia < 0:
            bad.append({"law": "g >= 0 implies integral >= 0"})
        if ga.le_on_common(gb) and ia > ib:
            bad.append({"law": "g_a <= g_b implies integral a <= integral b"})
        if abs(ia) > norm1(a).exact:
            bad.append({"law": "|integral a| <= norm1(a)"})
    entries.append(verdict("lemmas", bad, sampled=True))

    bad = []
    for _ in range(samples):
        a = random_finite_rep(S, rng)
        partial = reduce(rep_add, [embed(t) for t in a.terms(a.support)])
        if eq_int(a, partial, p) is not IntEquality.EQUAL:
            bad.append({"law": "partial sums of embeddings converge"})
        total = compact(reduce(add, a.terms(a.support)))
        if eq_int(a, embed(total), p) is not IntEquality.EQUAL:
            bad.append({"law": "embedded simple functions are dense"})
        v = random_sf(S, rng, 2)
        if norm1(embed(v)).exact != integral(abs_sf(v)):
            bad.append({"law": "embed preserves the norm", "v": v.render()})
    entries.append(verdict("density", bad, sampled=True))

    bad = []
    full = [i for i in S.index if S.family(i).pos == S.ground.full]
    if full:
        v = SimpleFunction.of(S, [(1, full[0])])
        g = geometric(v, Fraction(1, 2))
        if compare_at(integral_rep(g), integral(v), p) is not Ordering.WITHIN:
            bad.append({"law": "geometric integral"})
        for n in range(0, 4):
            if not compression_bound_holds(g, n, p):
                bad.append({"law": "compression bound", "n": n})
    entries.append(verdict("geometric", bad, detail={"precision": p}))

    return Report("pis-complete", entries)


def _nonneg(space: PreMeasureSpace, rng) -> SimpleFunction:
    return SimpleFunction.of(
        space, [(Fraction(rng.randint(0, 4), rng.randint(1, 4)), rng.choice(space.index)) for _ in range(rng.randint(1, 2))]
    )
