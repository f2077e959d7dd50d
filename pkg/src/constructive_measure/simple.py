"""Simple functions: finite rational combinations of indices.

A simple function ``[(a_1, i_1), ..., (a_n, i_n)]`` denotes the partial
function ``sum a_k * chi_k`` on the common domain ``F`` of the ``i_k``.
Two simple functions are equal when these partial functions coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Optional, Sequence

from .complemented import ComplementedSubset, PartialFn, meet, complement
from .premeasure import Index, PreMeasureSpace
from .report import CheckConfig, Report, verdict


class DomainError(ValueError):
    """Evaluation outside the domain of a (partial) function."""


@dataclass(frozen=True)
class SimpleFunction:
    """Structural equality compares term lists; use :func:`sf_equal` for the
    extensional one."""

    space: PreMeasureSpace
    terms: tuple = ()

    @classmethod
    def of(cls, space: PreMeasureSpace, terms: Iterable) -> "SimpleFunction":
        return cls(space, tuple((Fraction(a), i) for a, i in terms))

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def domain(self) -> int:
        return reduce(lambda d, t: d & self.space.domain(t[1]), self.terms, self.space.ground.full)

    @cached_property
    def function(self) -> PartialFn:
        S = self.space
        fams = [(a, S.family(i).pos) for a, i in self.terms]
        return PartialFn.build(
            S.ground, self.domain, lambda k: sum((a for a, pos in fams if pos >> k & 1), Fraction(0))
        )

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __add__(self, other: "SimpleFunction") -> "SimpleFunction":
        return add(self, other)

    def __neg__(self) -> "SimpleFunction":
        return scalar_mul(-1, self)

    def __sub__(self, other: "SimpleFunction") -> "SimpleFunction":
        return add(self, scalar_mul(-1, other))

    def __rmul__(self, a) -> "SimpleFunction":
        return scalar_mul(a, self)

    def render(self) -> list:
        return [[str(a), self.space.render(i)] for a, i in self.terms]


def evaluate(v: SimpleFunction, x) -> Fraction:
    k = v.space.ground.index(x)
    value = v.function.values[k]
    if value is None:
        raise DomainError(f"{x!r} is outside the domain of the simple function")
    return value


def sf_equal(v: SimpleFunction, w: SimpleFunction) -> bool:
    return v.function == w.function


def integral(v: SimpleFunction) -> Fraction:
    return sum((a * v.space.mu(i) for a, i in v.terms), Fraction(0))


# -- disjoint representation ------------------------------------------------


def _profile_index(S: PreMeasureSpace, ones: Sequence[Index], zeros: Sequence[Index], null: Index) -> Index:
    inner = S.join_all(zeros) if zeros else null
    return S.diff(S.diff(S.meet_all(ones), inner), null)


def disjrep(v: SimpleFunction) -> SimpleFunction:
    """Disjoint representation over all non-zero 0/1 profiles of the terms.

    The term for profile ``f`` has coefficient ``sum_{f(k)=1} a_k`` and
    index ``(meet_{f(k)=1} i_k) ~ (join_{f(k)=0} i_k)``, restricted to the
    common domain.  An empty join is replaced by the null part
    ``join_k (i_k ~ i_k)``.  Profile ``f`` is encoded as the integer whose
    bit ``k`` is ``f(k+1)``.
    """
    S = v.space
    n = len(v.terms)
    if n == 0:
        return v
    coeffs = [a for a, _ in v.terms]
    idx = [i for _, i in v.terms]
    null = S.null_part(idx)
    out = []
    for f in range(1, 1 << n):
        ones = [idx[k] for k in range(n) if f >> k & 1]
        zeros = [idx[k] for k in range(n) if not f >> k & 1]
        a = sum((coeffs[k] for k in range(n) if f >> k & 1), Fraction(0))
        out.append((a, _profile_index(S, ones, zeros, null)))
    return SimpleFunction(S, tuple(out))


def collect(v: SimpleFunction) -> SimpleFunction:
    """Merge terms with the same index, keeping first-occurrence order."""
    acc: dict = {}
    for a, i in v.terms:
        acc[i] = acc.get(i, Fraction(0)) + a
    return SimpleFunction(v.space, tuple((a, i) for i, a in acc.items()))


def compact(v: SimpleFunction) -> SimpleFunction:
    """An equal simple function with pairwise disjoint, inhabited terms.

    Profiles whose positive part is empty are pruned while they are being
    built, so the cost follows the number of inhabited cells rather than
    ``2**n``.  Equal indices are merged and zero coefficients dropped; if
    nothing is left, the single term ``(0, null part)`` keeps the domain.
    """
    S = v.space
    n = len(v.terms)
    if n == 0:
        return v
    coeffs = [a for a, _ in v.terms]
    idx = [i for _, i in v.terms]
    fams = [S.family(i) for i in idx]
    null = S.null_part(idx)
    cells = []

    def walk(k: int, f: int, cs: Optional[ComplementedSubset]) -> None:
        if cs is not None and cs.pos == 0:
            return
        if k == n:
            if f:
                cells.append(f)
            return
        walk(k + 1, f | 1 << k, fams[k] if cs is None else meet(cs, fams[k]))
        walk(k + 1, f, complement(fams[k]) if cs is None else meet(cs, complement(fams[k])))

    walk(0, 0, None)
    out = []
    for f in cells:
        a = sum((coeffs[k] for k in range(n) if f >> k & 1), Fraction(0))
        if a == 0:
            continue
        ones = [idx[k] for k in range(n) if f >> k & 1]
        zeros = [idx[k] for k in range(n) if not f >> k & 1]
        out.append((a, _profile_index(S, ones, zeros, null)))
    if not out:
        out = [(Fraction(0), null)]
    return collect(SimpleFunction(S, tuple(out)))


def zero_on(v: SimpleFunction) -> SimpleFunction:
    """The zero function on the domain of ``v``."""
    if not v.terms:
        return v
    return SimpleFunction(v.space, ((Fraction(0), v.space.null_part([i for _, i in v.terms])),))


def is_disjoint(v: SimpleFunction) -> bool:
    fams = [v.space.family(i).pos for _, i in v.terms]
    return all(not (p & q) for p, q in itertools.combinations(fams, 2))


# -- lattice-ordered vector space operations --------------------------------


def scalar_mul(a, v: SimpleFunction) -> SimpleFunction:
    a = Fraction(a)
    return SimpleFunction(v.space, tuple((a * c, i) for c, i in v.terms))


def add(v: SimpleFunction, w: SimpleFunction) -> SimpleFunction:
    if v.space is not w.space:
        raise ValueError("simple functions over different spaces")
    return SimpleFunction(v.space, v.terms + w.terms)


def abs_sf(v: SimpleFunction) -> SimpleFunction:
    d = disjrep(v)
    return SimpleFunction(v.space, tuple((abs(a), i) for a, i in d.terms))


def meet_one(v: SimpleFunction) -> SimpleFunction:
    d = disjrep(v)
    return SimpleFunction(v.space, tuple((min(a, Fraction(1)), i) for a, i in d.terms))


def sf_join(v: SimpleFunction, w: SimpleFunction) -> SimpleFunction:
    """``w + (v - w + |v - w|) / 2``."""
    diff = v - w
    return add(w, scalar_mul(Fraction(1, 2), add(diff, abs_sf(diff))))


def sf_meet(v: SimpleFunction, w: SimpleFunction) -> SimpleFunction:
    return -sf_join(-v, -w)


# -- the phi_N construction -------------------------------------------------


@dataclass(frozen=True)
class PhiResult:
    index: Index
    n: int
    measure: Fraction
    integral: Fraction

    @property
    def ratio(self) -> Optional[Fraction]:
        """``mu(phi_N(v)) / (N * integral(v))`` when the integral is positive."""
        if self.integral > 0:
            return self.measure / (self.n * self.integral)
        return None


def phi_n(v: SimpleFunction, n: int, literal: bool = False) -> Index:
    """An index whose positive part carries the values ``>= 1/N`` of ``v``.

    Its domain lies inside the domain of ``v``, ``f_v < 1/N`` on its
    negative part, and ``mu(phi_N(v)) <= 2N * integral(v)``.

    With ``disjrep(v) = (a_k, i_k)``, terms with ``a_k > 1/(2N)`` are joined
    unless every ``a_k`` is below ``1/N``.  By default that test only looks at
    terms whose positive part is inhabited, which makes the result depend on
    ``f_v`` alone.  ``literal=True`` tests every term; empty cells with a
    large coefficient then flip the branch and equal inputs can give
    different outputs.
    """
    if n < 1:
        raise ValueError("N must be a positive integer")
    if any(value < 0 for _, value in v.function.items()):
        raise ValueError("phi_N needs a non-negative simple function")
    S = v.space
    if not v.terms:
        raise ValueError("phi_N needs at least one term")
    null = S.null_part([i for _, i in v.terms])
    d = disjrep(v).terms
    lo, hi = Fraction(1, n), Fraction(1, 2 * n)
    phi = [a < lo or (not literal and S.family(i).pos == 0) for a, i in d]
    psi = [a > hi for a, _ in d]
    if all(phi):
        return null
    return S.diff(S.join_all([i for (a, i), keep in zip(d, psi) if keep]), null)


def phi_report(v: SimpleFunction, n: int) -> PhiResult:
    j = phi_n(v, n)
    return PhiResult(j, n, v.space.mu(j), integral(v))


def phi_violations(v: SimpleFunction, n: int) -> list:
    S = v.space
    j = phi_n(v, n)
    fam = S.family(j)
    bad = []
    if fam.domain & ~v.domain:
        bad.append("domain escapes F")
    if any(v.function.values[k] >= Fraction(1, n) for k in range(len(S.ground)) if fam.neg >> k & 1):
        bad.append("f_v >= 1/N on the negative part")
    if S.mu(j) > 2 * n * integral(v):
        bad.append("mu(phi_N(v)) > 2N * integral(v)")
    return bad


# -- generators used by the checkers ----------------------------------------


def random_sf(space: PreMeasureSpace, rng, max_terms: int = 3, coefficients: Sequence = (-2, -1, 0, 1, 2)) -> SimpleFunction:
    n = rng.randint(0, max_terms)
    return SimpleFunction.of(space, [(rng.choice(coefficients), rng.choice(space.index)) for _ in range(n)])


def all_sfs(space: PreMeasureSpace, max_terms: int, coefficients: Sequence) -> Iterable[SimpleFunction]:
    single = [(Fraction(a), i) for a in coefficients for i in space.index]
    for n in range(max_terms + 1):
        for terms in itertools.product(single, repeat=n):
            yield SimpleFunction(space, terms)


def equal_variant(v: SimpleFunction, rng) -> SimpleFunction:
    """A random simple function equal to ``v``: split, reorder, pad or disjrep."""
    terms = list(v.terms)
    kind = rng.choice(("split", "reorder", "pad", "disjrep")) if terms else "pad-empty"
    if kind == "split":
        k = rng.randrange(len(terms))
        a, i = terms[k]
        b = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        terms[k : k + 1] = [(b, i), (a - b, i)]
    elif kind == "reorder":
        rng.shuffle(terms)
    elif kind == "pad":
        terms.insert(rng.randrange(len(terms) + 1), (Fraction(0), rng.choice(terms)[1]))
    elif kind == "disjrep":
        return disjrep(v)
    else:
        # A zero term on a full-domain index keeps the empty function's domain.
        full = [i for i in v.space.index if v.space.domain(i) == v.space.ground.full]
        if full:
            terms = [(Fraction(0), rng.choice(full))]
    return SimpleFunction(v.space, tuple(terms))


# -- pre-integration checks -------------------------------------------------


def _pis1_failures(v: SimpleFunction, w: SimpleFunction, a: Fraction, b: Fraction) -> list:
    bad = []
    fv, fw = v.function, w.function
    if scalar_mul(a, v).function != fv.scale(a):
        bad.append("f(a v) = a f(v)")
    if add(v, w).function != fv + fw:
        bad.append("f(v + w) = f(v) + f(w)")
    if abs_sf(v).function != abs(fv):
        bad.append("f(|v|) = |f(v)|")
    if meet_one(v).function != fv.map(lambda t: min(t, Fraction(1))):
        bad.append("f(v meet 1) = f(v) meet 1")
    if integral(add(scalar_mul(a, v), scalar_mul(b, w))) != a * integral(v) + b * integral(w):
        bad.append("linearity of the integral")
    return bad


def _witness(v: SimpleFunction, alphas: Sequence[SimpleFunction]) -> Optional[int]:
    dom = reduce(lambda d, s: d & s.domain, alphas, v.domain)
    for k in range(len(v.space.ground)):
        if dom >> k & 1:
            total = sum((s.function.values[k] for s in alphas), Fraction(0))
            if total < v.function.values[k]:
                return k
    return None


def _nonneg_sf(space: PreMeasureSpace, rng, max_terms: int) -> SimpleFunction:
    n = rng.randint(1, max_terms)
    return SimpleFunction.of(space, [(Fraction(rng.randint(0, 4), rng.randint(1, 4)), rng.choice(space.index)) for _ in range(n)])


def pis2_instances(space: PreMeasureSpace, config: CheckConfig) -> list:
    """Sampled ``(v, alphas)`` with ``sum integral(alpha) < integral(v)``.

    The first instance is the constant-1 function against half of itself.
    """
    rng = config.rng("pis2")
    out = []
    full = [i for i in space.index if space.family(i).pos == space.ground.full]
    if full:
        one = SimpleFunction.of(space, [(1, full[0])])
        out.append((one, [scalar_mul(Fraction(1, 2), one)]))
    attempts = 0
    while len(out) < config.samples and attempts < 200 * config.samples:
        attempts += 1
        v = random_sf(space, rng, config.max_terms, config.coefficients)
        alphas = [_nonneg_sf(space, rng, 2) for _ in range(rng.randint(0, 3))]
        if sum((integral(s) for s in alphas), Fraction(0)) < integral(v):
            out.append((v, alphas))
    return out


def pis4_failures(v: SimpleFunction, max_m: int) -> list:
    """Stabilisation of ``m (v/m meet 1)`` and the decay of ``(m|v| meet 1)/m``."""
    S = v.space
    d = disjrep(v).terms
    bound = max((abs(a) for a, _ in d), default=Fraction(0))
    bad = []
    for m in range(1, max_m + 1):
        alpha = scalar_mul(m, meet_one(scalar_mul(Fraction(1, m), v)))
        if m > bound:
            if not sf_equal(alpha, v):
                bad.append({"m": m, "law": "alpha(m) = v once m > max |a_k|"})
            if integral(alpha) != integral(v):
                bad.append({"m": m, "law": "integral(alpha(m)) = integral(v)"})
        beta = scalar_mul(Fraction(1, m), meet_one(scalar_mul(m, abs_sf(v))))
        exact = sum((min(m * abs(a), Fraction(1)) * S.mu(i) for a, i in d), Fraction(0)) / m
        ceiling = sum((S.mu(i) for _, i in d), Fraction(0)) / m
        if integral(beta) != exact or exact > ceiling:
            bad.append({"m": m, "law": "integral(beta(m)) <= (sum of term measures)/m"})
    return bad


def check_pis_simple(space: PreMeasureSpace, config: CheckConfig = CheckConfig()) -> Report:
    """Check the pre-integration axioms for simple functions over ``space``.

    PIS1 and PIS3 run exhaustively over single-term functions with the
    coefficient grid (plus sampled multi-term pairs for PIS1); PIS2 is
    sampled with a brute-force witness search; PIS4 is exact for
    ``m <= config.max_m``.
    """
    S = space
    grid = [Fraction(c) for c in config.coefficients]
    small = [SimpleFunction(S, ())] + [SimpleFunction(S, ((a, i),)) for a in grid for i in S.index]
    entries = []

    bad = []
    scalars = sorted(set(grid) | {Fraction(1, 2), Fraction(-3, 2)})
    for v in small:
        for w in small:
            for a in scalars:
                for fail in _pis1_failures(v, w, a, Fraction(1) - a):
                    bad.append({"law": fail, "v": v.render(), "w": w.render(), "a": str(a)})
    rng = config.rng("pis1")
    for _ in range(config.samples):
        v = random_sf(S, rng, config.max_terms, config.coefficients)
        w = random_sf(S, rng, config.max_terms, config.coefficients)
        a, b = rng.choice(scalars), rng.choice(scalars)
        for fail in _pis1_failures(v, w, a, b):
            bad.append({"law": fail, "v": v.render(), "w": w.render(), "a": str(a), "b": str(b)})
    entries.append(verdict("PIS1", bad, detail={"exhaustive_pairs": len(small) ** 2, "sampled": config.samples}))

    bad = []
    instances = pis2_instances(S, config)
    for v, alphas in instances:
        if _witness(v, alphas) is None:
            bad.append({"v": v.render(), "alpha": [s.render() for s in alphas]})
    entries.append(verdict("PIS2", bad, sampled=True, detail={"instances": len(instances)}))

    positive = [i for i in S.index if S.mu(i) > 0]
    bad = []
    for i in positive:
        if integral(SimpleFunction.of(S, [(1 / S.mu(i), i)])) != 1:
            bad.append({"i": S.render(i)})
    if not positive:
        bad.append({"law": "no index with positive measure"})
    entries.append(verdict("PIS3", bad, detail={"witnesses": len(positive)}))

    bad = []
    for v in small:
        bad += [dict(f, v=v.render()) for f in pis4_failures(v, config.max_m)]
    rng = config.rng("pis4")
    for _ in range(max(1, config.samples // 10)):
        v = random_sf(S, rng, config.max_terms, config.coefficients)
        bad += [dict(f, v=v.render()) for f in pis4_failures(v, config.max_m)]
    entries.append(verdict("PIS4", bad, detail={"max_m": config.max_m}))

    return Report("pis-simple", entries)


def pis_basic_lemmas(space: PreMeasureSpace, config: CheckConfig = CheckConfig()) -> Report:
    S = space
    rng = config.rng("lemmas")
    sample = [random_sf(S, rng, config.max_terms, config.coefficients) for _ in range(max(500, config.samples))]
    entries = []

    bad = [v.render() for v in sample if all(t >= 0 for _, t in v.function.items()) and integral(v) < 0]
    entries.append(verdict("nonneg-integral", bad, sampled=True))

    bad = [v.render() for v in sample if abs(integral(v)) > integral(abs_sf(v))]
    entries.append(verdict("abs-integral", bad, sampled=True, detail={"samples": len(sample)}))

    bad = []
    for v, w in zip(sample, sample[1:]):
        if v.function.le_on_common(w.function) and integral(v) > integral(w):
            bad.append({"v": v.render(), "w": w.render()})
    entries.append(verdict("order", bad, sampled=True))

    # A function plus a non-negative series with positive total integral is positive somewhere.
    bad = []
    for _ in range(config.samples):
        v = random_sf(S, rng, config.max_terms, config.coefficients)
        alphas = [_nonneg_sf(S, rng, 2) for _ in range(rng.randint(0, 3))]
        if integral(v) + sum((integral(s) for s in alphas), Fraction(0)) > 0:
            dom = reduce(lambda d, s: d & s.domain, alphas, v.domain)
            hit = any(
                v.function.values[k] + sum((s.function.values[k] for s in alphas), Fraction(0)) > 0
                for k in range(len(S.ground))
                if dom >> k & 1
            )
            if not hit:
                bad.append({"v": v.render(), "alpha": [s.render() for s in alphas]})
    entries.append(verdict("positive-somewhere", bad, sampled=True))

    # phi_N: the stated bound mu <= 2N * integral, plus the largest ratio seen.
    bad = []
    worst = Fraction(0)
    for _ in range(config.samples):
        v = _nonneg_sf(S, rng, config.max_terms)
        n = rng.randint(1, 6)
        bad += [{"v": v.render(), "N": n, "law": law} for law in phi_violations(v, n)]
        ratio = phi_report(v, n).ratio
        if ratio is not None:
            worst = max(worst, ratio)
    entries.append(verdict("phi", bad, sampled=True, detail={"largest_ratio": str(worst)}))

    return Report("pis-lemmas", entries)


def order_sweep(space: PreMeasureSpace, max_terms: int = 2, coefficients: Sequence = (-2, -1, 0, 1, 2)) -> list:
    """Exhaustive order check: ``f_v <= f_w`` on the common domain forces ``integral(v) <= integral(w)``."""
    keys = {}
    for v in all_sfs(space, max_terms, coefficients):
        keys.setdefault((v.function.values, integral(v)), v)
    items = list(keys.items())
    bad = []
    for (fv, iv), v in items:
        for (fw, iw), w in items:
            if iv > iw and all(a <= b for a, b in zip(fv, fw) if a is not None and b is not None):
                bad.append({"v": v.render(), "w": w.render()})
    return bad


__all__ = [
    "DomainError",
    "SimpleFunction",
    "abs_sf",
    "add",
    "check_pis_simple",
    "collect",
    "compact",
    "disjrep",
    "evaluate",
    "integral",
    "meet_one",
    "phi_n",
    "phi_report",
    "pis_basic_lemmas",
    "scalar_mul",
    "sf_equal",
    "sf_join",
    "sf_meet",
    "zero_on",
]
