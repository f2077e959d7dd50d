"""Pre-measure spaces over a finite ground set.

A space bundles two index sets of complemented subsets.  ``I`` carries
meet, join, a binary difference ``i ~ j`` (meaning ``i`` meet the
complement of ``j``) and the measure ``mu``.  ``J`` carries meet, join and
a unary complement ``~``.  A map ``h: I -> J`` ties them together.  The
shipped spaces use ``J = I`` and ``h = id`` with indicator functions as
indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Mapping, Optional, Sequence

from .complemented import (
    ComplementedSubset,
    GroundSet,
    IndicatorFn,
    all_indicators,
    complement,
    detachable,
    join,
    meet,
)
from .report import CheckConfig, Report, verdict

Index = Any


@dataclass(frozen=True, eq=False)
class PreMeasureSpace:
    ground: GroundSet
    index: tuple
    family: Callable[[Index], ComplementedSubset]
    meet: Callable[[Index, Index], Index]
    join: Callable[[Index, Index], Index]
    diff: Callable[[Index, Index], Index]
    measure: Callable[[Index], Fraction]
    index_j: tuple
    family_j: Callable[[Index], ComplementedSubset]
    meet_j: Callable[[Index, Index], Index]
    join_j: Callable[[Index, Index], Index]
    tilde_j: Callable[[Index], Index]
    h: Callable[[Index], Index]
    name: str = "space"
    render: Callable[[Index], Any] = str

    def mu(self, i: Index) -> Fraction:
        return Fraction(self.measure(i))

    def pos(self, i: Index) -> int:
        return self.family(i).pos

    def domain(self, i: Index) -> int:
        return self.family(i).domain

    def join_all(self, indices: Sequence[Index]) -> Index:
        return reduce(self.join, indices)

    def meet_all(self, indices: Sequence[Index]) -> Index:
        return reduce(self.meet, indices)

    def null_part(self, indices: Sequence[Index]) -> Index:
        """``(i_1 ~ i_1) v ... v (i_n ~ i_n)``, whose family is ``(empty, F)``.

        ``F`` is the common domain of the ``i_k``.
        """
        return self.join_all([self.diff(i, i) for i in indices])

    def with_measure(self, measure: Callable[[Index], Fraction], name: Optional[str] = None) -> "PreMeasureSpace":
        return replace(self, measure=measure, name=name or f"{self.name}*")


def _indicator_space(ground: GroundSet, measure: Callable[[IndicatorFn], Fraction], name: str) -> PreMeasureSpace:
    full = ground.full

    # Pointwise: f meet g = fg, f join g = f + g - fg, ~f = 1 - f, i ~ j = i(1 - j).
    def f_meet(f: IndicatorFn, g: IndicatorFn) -> IndicatorFn:
        return IndicatorFn(ground, f.mask & g.mask)

    def f_join(f: IndicatorFn, g: IndicatorFn) -> IndicatorFn:
        return IndicatorFn(ground, f.mask | g.mask)

    def f_tilde(f: IndicatorFn) -> IndicatorFn:
        return IndicatorFn(ground, full & ~f.mask)

    def f_diff(f: IndicatorFn, g: IndicatorFn) -> IndicatorFn:
        return f_meet(f, f_tilde(g))

    fns = tuple(all_indicators(ground))
    return PreMeasureSpace(
        ground=ground,
        index=fns,
        family=detachable,
        meet=f_meet,
        join=f_join,
        diff=f_diff,
        measure=measure,
        index_j=fns,
        family_j=detachable,
        meet_j=f_meet,
        join_j=f_join,
        tilde_j=f_tilde,
        h=lambda f: f,
        name=name,
        render=lambda f: f.bits,
    )


def dirac(ground: GroundSet, point) -> PreMeasureSpace:
    """Point mass at ``point`` on the algebra of all indicator functions."""
    k = ground.index(point)
    return _indicator_space(ground, lambda f: Fraction(f.mask >> k & 1), f"dirac({ground.elements[k]})")


def weighted_counting(ground: GroundSet, weights: Mapping) -> PreMeasureSpace:
    """``mu(f) = sum of w(x) over f(x) = 1`` with non-negative weights."""
    w = [Fraction(0)] * len(ground)
    for label, value in weights.items():
        w[ground.index(label)] = Fraction(value)
    if any(v < 0 for v in w):
        raise ValueError("weights must be non-negative")
    if not any(w):
        raise ValueError("at least one weight must be positive")

    def measure(f: IndicatorFn) -> Fraction:
        return sum((w[k] for k in range(len(ground)) if f.mask >> k & 1), Fraction(0))

    return _indicator_space(ground, measure, "weighted")


def table_measure(ground: GroundSet, values: Mapping[str, Fraction]) -> PreMeasureSpace:
    """A measure given by an explicit table on bit strings (missing entries are 0).

    Nothing is assumed about the table; use ``check_pms`` to find out
    whether it defines a pre-measure.
    """
    table = {}
    for bits, value in values.items():
        table[IndicatorFn.from_bits(ground, bits).mask] = Fraction(value)
    return _indicator_space(ground, lambda f: table.get(f.mask, Fraction(0)), "table")


# -- axiom checker ----------------------------------------------------------


def check_pms(space: PreMeasureSpace, config: CheckConfig = CheckConfig()) -> Report:
    """Check the pre-measure space axioms exhaustively over the finite index sets.

    PMS4 quantifies over sequences; here every finite meet of indices is
    visited together with the intersection of the positive parts used to
    reach it, and a positive measure must come with an inhabited
    intersection.  Passing this implies the sequence form of the axiom.
    """
    S = space
    I, J = S.index, S.index_j
    fam, famj = S.family, S.family_j
    show = S.render
    entries = []

    bad = [show(i) for i in I if fam(i).pos & fam(i).neg]
    entries.append(verdict("family-disjoint", bad))

    bad = [{"index": show(i), "mu": str(S.mu(i))} for i in I if S.mu(i) < 0]
    entries.append(verdict("measure-nonneg", bad))

    # I and J are sets of complemented subsets: distinct indices name distinct subsets.
    bad = []
    for name, idx, f in (("I", I, fam), ("J", J, famj)):
        seen: dict = {}
        for i in idx:
            key = f(i)
            if key in seen and seen[key] != i:
                bad.append({"set": name, "indices": [show(seen[key]), show(i)]})
            seen.setdefault(key, i)
    entries.append(verdict("iset", bad))

    bad = []
    for i in I:
        if famj(S.h(i)) != fam(i):
            bad.append({"law": "h preserves the family", "i": show(i)})
        for j in I:
            hi, hj = S.h(i), S.h(j)
            if famj(S.h(S.meet(i, j))) != famj(S.meet_j(hi, hj)):
                bad.append({"law": "h(i meet j)", "i": show(i), "j": show(j)})
            if famj(S.h(S.join(i, j))) != famj(S.join_j(hi, hj)):
                bad.append({"law": "h(i join j)", "i": show(i), "j": show(j)})
            if famj(S.h(S.diff(i, j))) != famj(S.meet_j(hi, S.tilde_j(hj))):
                bad.append({"law": "h(i ~ j)", "i": show(i), "j": show(j)})
    entries.append(verdict("h-compat", bad))

    bad = []
    for i in J:
        if famj(S.tilde_j(i)) != complement(famj(i)):
            bad.append({"law": "family(~i) = -family(i)", "i": show(i)})
        for j in J:
            if famj(S.meet_j(i, j)) != meet(famj(i), famj(j)):
                bad.append({"law": "family(i meet j)", "i": show(i), "j": show(j)})
            if famj(S.join_j(i, j)) != join(famj(i), famj(j)):
                bad.append({"law": "family(i join j)", "i": show(i), "j": show(j)})
    for i in I:
        for j in I:
            lhs = S.mu(i) + S.mu(j)
            rhs = S.mu(S.join(i, j)) + S.mu(S.meet(i, j))
            if lhs != rhs:
                bad.append(
                    {
                        "law": "mu(i) + mu(j) = mu(i join j) + mu(i meet j)",
                        "i": show(i),
                        "j": show(j),
                        "lhs": str(lhs),
                        "rhs": str(rhs),
                    }
                )
    entries.append(verdict("PMS1", bad))

    by_family: dict = {}
    for k in I:
        by_family.setdefault(famj(S.h(k)), []).append(k)
    bad = []
    for i in I:
        hi = S.h(i)
        for j in J:
            ks = by_family.get(famj(S.meet_j(hi, j)), [])
            ls = by_family.get(famj(S.meet_j(hi, S.tilde_j(j))), [])
            for k in ks:
                if not any(S.mu(i) == S.mu(k) + S.mu(l) for l in ls):
                    bad.append(
                        {
                            "law": "mu(i) = mu(k) + mu(l)",
                            "i": show(i),
                            "j": show(j),
                            "k": show(k),
                            "candidates_l": [show(l) for l in ls],
                        }
                    )
    entries.append(verdict("PMS2", bad))

    witness = next((i for i in I if S.mu(i) > 0), None)
    entries.append(
        verdict(
            "PMS3",
            [] if witness is not None else [{"law": "some index has positive measure"}],
            detail={"witness": show(witness)} if witness is not None else {},
        )
    )

    bad = []
    start = {(i, fam(i).pos): (i,) for i in I}
    frontier = list(start)
    seen = dict(start)
    while frontier:
        nxt = []
        for state in frontier:
            c, p = state
            for i in I:
                new = (S.meet(c, i), p & fam(i).pos)
                if new not in seen:
                    seen[new] = seen[state] + (i,)
                    nxt.append(new)
        frontier = nxt
    for (c, p), word in seen.items():
        if S.mu(c) > 0 and p == 0:
            bad.append({"law": "positive limit needs a common point", "meets": [show(i) for i in word]})
    entries.append(verdict("PMS4", bad, detail={"states": len(seen)}))

    return Report("pms", entries)


# -- lemmas about positive parts and restriction ----------------------------


def empty_positive_zero(space: PreMeasureSpace) -> list:
    """Indices with empty positive part but non-zero measure (should be none)."""
    bad = [space.render(i) for i in space.index if space.pos(i) == 0 and space.mu(i) != 0]
    bad += [space.render(i) for i in space.index if space.mu(space.diff(i, i)) != 0]
    return bad


def restriction(space: PreMeasureSpace, j: Index, indices: Sequence[Index]) -> Index:
    """``j ~ l`` with ``l`` the join of ``i_k ~ i_k``: restricts ``j`` to the common domain."""
    if not indices:
        return j
    return space.diff(j, space.null_part(indices))


def restriction_violations(space: PreMeasureSpace, j: Index, indices: Sequence[Index]) -> list:
    S = space
    bad = []
    full = S.ground.full
    dom = reduce(lambda a, b: a & b, (S.domain(i) for i in indices), full)
    if indices:
        l = S.null_part(indices)
        if S.family(l).pos != 0 or S.family(l).neg != dom:
            bad.append({"law": "l = (empty, F)", "l": str(S.family(l))})
    k = restriction(S, j, indices)
    fj, fk = S.family(j), S.family(k)
    if fk.pos != fj.pos & dom or fk.neg != fj.neg & dom:
        bad.append({"law": "family(k) = (pos(j) & F, neg(j) & F)", "j": S.render(j), "k": str(fk)})
    if S.mu(k) != S.mu(j):
        bad.append({"law": "mu(k) = mu(j)", "j": S.render(j), "mu_j": str(S.mu(j)), "mu_k": str(S.mu(k))})
    return bad


def _sample_tuples(space: PreMeasureSpace, samples: int, max_n: int, rng) -> list:
    return [tuple(rng.choice(space.index) for _ in range(rng.randint(0, max_n))) for _ in range(samples)]


def restrict_measure_invariance(space: PreMeasureSpace, samples: int, seed: int = 0, max_n: int = 3) -> list:
    rng = CheckConfig(seed=seed).rng("restrict")
    bad = []
    for idx in _sample_tuples(space, samples, max_n, rng):
        j = rng.choice(space.index)
        bad += restriction_violations(space, j, idx)
    return bad


def monotonicity_violations(space: PreMeasureSpace, samples: int = 200, seed: int = 0, max_n: int = 2) -> list:
    """Pairs with chi_i <= chi_j on a common restricted domain but mu(i) > mu(j)."""
    S = space
    rng = CheckConfig(seed=seed).rng("monotone")
    tuples = [()] + _sample_tuples(S, samples, max_n, rng)
    bad = []
    for idx in tuples:
        dom = reduce(lambda a, b: a & b, (S.domain(i) for i in idx), S.ground.full)
        for i, j in itertools.product(S.index, repeat=2):
            fi, fj = S.family(i), S.family(j)
            common = fi.domain & fj.domain & dom
            # chi_i <= chi_j on the common domain: no point with i = 1 and j = 0.
            if fi.pos & fj.neg & common:
                continue
            if S.mu(i) > S.mu(j):
                bad.append({"i": S.render(i), "j": S.render(j), "restrict": [S.render(t) for t in idx]})
    return bad


def lemma_report(space: PreMeasureSpace, config: CheckConfig = CheckConfig()) -> Report:
    entries = [
        verdict("empty-positive-zero", empty_positive_zero(space)),
        verdict(
            "restriction",
            restrict_measure_invariance(space, config.samples, config.seed),
            sampled=True,
            detail={"samples": config.samples},
        ),
        verdict(
            "monotone",
            monotonicity_violations(space, max(1, config.samples // 20), config.seed),
            sampled=True,
        ),
    ]
    return Report("pms-lemmas", entries)
