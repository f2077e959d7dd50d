"""Complemented subsets of a finite ground set.

Subsets are stored as bitmasks: bit ``k`` stands for ``ground[k]``.  A
complemented subset is a pair of disjoint subsets ``(pos, neg)``; its
characteristic function is 1 on ``pos``, 0 on ``neg`` and undefined
elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

Label = str


@dataclass(frozen=True)
class GroundSet:
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("ground set labels must be distinct")

    @classmethod
    def of(cls, labels: Iterable) -> "GroundSet":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, x: Union[Label, int]) -> int:
        """Position of a label; integers are taken as positions already."""
        if isinstance(x, int) and not isinstance(x, bool):
            if not 0 <= x < len(self.elements):
                raise KeyError(x)
            return x
        try:
            return self.elements.index(x)
        except ValueError:
            raise KeyError(x) from None

    def mask(self, labels: Iterable) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels(self, mask: int) -> list:
        return [x for k, x in enumerate(self.elements) if mask >> k & 1]

    def subsets(self) -> Iterator[int]:
        return iter(range(1 << len(self.elements)))


@dataclass(frozen=True)
class ComplementedSubset:
    ground: GroundSet
    pos: int
    neg: int

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("positive and negative parts must be disjoint")
        if (self.pos | self.neg) & ~self.ground.full:
            raise ValueError("complemented subset leaves the ground set")

    @property
    def domain(self) -> int:
        return self.pos | self.neg

    def __and__(self, other: "ComplementedSubset") -> "ComplementedSubset":
        return meet(self, other)

    def __or__(self, other: "ComplementedSubset") -> "ComplementedSubset":
        return join(self, other)

    def __neg__(self) -> "ComplementedSubset":
        return complement(self)

    def __sub__(self, other: "ComplementedSubset") -> "ComplementedSubset":
        return minus(self, other)

    def __le__(self, other: "ComplementedSubset") -> bool:
        return cs_leq(self, other)

    def render(self) -> dict:
        return {"pos": self.ground.labels(self.pos), "neg": self.ground.labels(self.neg)}

    def __str__(self) -> str:
        pos = ", ".join(map(str, self.ground.labels(self.pos)))
        neg = ", ".join(map(str, self.ground.labels(self.neg)))
        return f"({{{pos}}}, {{{neg}}})"


def complemented(ground: GroundSet, pos: Iterable, neg: Iterable) -> ComplementedSubset:
    return ComplementedSubset(ground, ground.mask(pos), ground.mask(neg))


def _same_ground(a: ComplementedSubset, b: ComplementedSubset) -> None:
    if a.ground != b.ground:
        raise ValueError("complemented subsets over different ground sets")


def meet(a: ComplementedSubset, b: ComplementedSubset) -> ComplementedSubset:
    _same_ground(a, b)
    return ComplementedSubset(
        a.ground,
        a.pos & b.pos,
        (a.pos & b.neg) | (a.neg & b.pos) | (a.neg & b.neg),
    )


def join(a: ComplementedSubset, b: ComplementedSubset) -> ComplementedSubset:
    _same_ground(a, b)
    return ComplementedSubset(
        a.ground,
        (a.pos & b.neg) | (a.neg & b.pos) | (a.pos & b.pos),
        a.neg & b.neg,
    )


def complement(a: ComplementedSubset) -> ComplementedSubset:
    return ComplementedSubset(a.ground, a.neg, a.pos)


def minus(a: ComplementedSubset, b: ComplementedSubset) -> ComplementedSubset:
    return meet(a, complement(b))


def cs_leq(a: ComplementedSubset, b: ComplementedSubset) -> bool:
    _same_ground(a, b)
    return (a.pos & ~b.pos) == 0 and (b.neg & ~a.neg) == 0


def all_complemented_subsets(ground: GroundSet) -> list[ComplementedSubset]:
    """All ``3**|X|`` complemented subsets."""
    out = []
    for labels in itertools.product((0, 1, 2), repeat=len(ground)):
        pos = sum(1 << k for k, t in enumerate(labels) if t == 1)
        neg = sum(1 << k for k, t in enumerate(labels) if t == 2)
        out.append(ComplementedSubset(ground, pos, neg))
    return out


# -- partial functions ------------------------------------------------------


@dataclass(frozen=True)
class PartialFn:
    """A rational-valued function defined on a subset of the ground set.

    ``values[k]`` is ``None`` exactly when ``ground[k]`` is outside the
    domain, so dataclass equality is extensional equality.
    """

    ground: GroundSet
    values: tuple

    @classmethod
    def build(cls, ground: GroundSet, domain: int, f: Callable[[int], Fraction]) -> "PartialFn":
        return cls(ground, tuple(Fraction(f(k)) if domain >> k & 1 else None for k in range(len(ground))))

    @property
    def domain(self) -> int:
        return sum(1 << k for k, v in enumerate(self.values) if v is not None)

    def __call__(self, x) -> Fraction:
        v = self.values[self.ground.index(x)]
        if v is None:
            raise KeyError(f"{x!r} is outside the domain")
        return v

    def defined_at(self, x) -> bool:
        return self.values[self.ground.index(x)] is not None

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return ((k, v) for k, v in enumerate(self.values) if v is not None)

    def combine(self, other: "PartialFn", op: Callable[[Fraction, Fraction], Fraction]) -> "PartialFn":
        if self.ground != other.ground:
            raise ValueError("partial functions over different ground sets")
        return PartialFn(
            self.ground,
            tuple(None if a is None or b is None else Fraction(op(a, b)) for a, b in zip(self.values, other.values)),
        )

    def map(self, op: Callable[[Fraction], Fraction]) -> "PartialFn":
        return PartialFn(self.ground, tuple(None if a is None else Fraction(op(a)) for a in self.values))

    def restrict(self, domain: int) -> "PartialFn":
        return PartialFn(self.ground, tuple(v if domain >> k & 1 else None for k, v in enumerate(self.values)))

    def __add__(self, other: "PartialFn") -> "PartialFn":
        return self.combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PartialFn") -> "PartialFn":
        return self.combine(other, lambda a, b: a - b)

    def __mul__(self, other: "PartialFn") -> "PartialFn":
        return self.combine(other, lambda a, b: a * b)

    def __neg__(self) -> "PartialFn":
        return self.map(lambda a: -a)

    def __abs__(self) -> "PartialFn":
        return self.map(abs)

    def scale(self, c) -> "PartialFn":
        c = Fraction(c)
        return self.map(lambda a: c * a)

    def minimum(self, other: "PartialFn") -> "PartialFn":
        return self.combine(other, min)

    def maximum(self, other: "PartialFn") -> "PartialFn":
        return self.combine(other, max)

    def le_on_common(self, other: "PartialFn") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values) if a is not None and b is not None)

    def render(self) -> dict:
        return {str(self.ground.elements[k]): str(v) for k, v in self.items()}


def characteristic(a: ComplementedSubset) -> PartialFn:
    return PartialFn.build(a.ground, a.domain, lambda k: 1 if a.pos >> k & 1 else 0)


def constant(ground: GroundSet, c, domain: Optional[int] = None) -> PartialFn:
    return PartialFn.build(ground, ground.full if domain is None else domain, lambda k: c)


# -- indicator functions, detachable sets, apartness ------------------------


@dataclass(frozen=True)
class IndicatorFn:
    """A total function ``X -> {0, 1}``, stored as the mask of its 1-set."""

    ground: GroundSet
    mask: int

    def __post_init__(self):
        if self.mask & ~self.ground.full:
            raise ValueError("indicator leaves the ground set")

    @classmethod
    def from_bits(cls, ground: GroundSet, bits: str) -> "IndicatorFn":
        if len(bits) != len(ground) or set(bits) - {"0", "1"}:
            raise ValueError(f"expected {len(ground)} binary digits, got {bits!r}")
        return cls(ground, sum(1 << k for k, b in enumerate(bits) if b == "1"))

    def __call__(self, x) -> int:
        return self.mask >> self.ground.index(x) & 1

    @property
    def bits(self) -> str:
        return "".join("1" if self.mask >> k & 1 else "0" for k in range(len(self.ground)))

    def __str__(self) -> str:
        return self.bits


def all_indicators(ground: GroundSet) -> list[IndicatorFn]:
    return [IndicatorFn(ground, m) for m in ground.subsets()]


def detachable(f: IndicatorFn) -> ComplementedSubset:
    """The complemented subset ``({f = 1}, {f = 0})``."""
    return ComplementedSubset(f.ground, f.mask, f.ground.full & ~f.mask)


def separated(ground: GroundSet, x, y) -> bool:
    """Apartness induced by the indicator functions: some ``f`` tells x and y apart."""
    i, j = ground.index(x), ground.index(y)
    return any((m >> i & 1) != (m >> j & 1) for m in ground.subsets())


def apartness_axioms(ground: GroundSet) -> list:
    """Violations of irreflexivity, symmetry and cotransitivity (empty if none)."""
    bad = []
    n = len(ground)
    for x in range(n):
        if separated(ground, x, x):
            bad.append(("irreflexive", x))
        for y in range(n):
            if separated(ground, x, y) != separated(ground, y, x):
                bad.append(("symmetric", x, y))
            if separated(ground, x, y):
                for z in range(n):
                    if not (separated(ground, x, z) or separated(ground, z, y)):
                        bad.append(("cotransitive", x, y, z))
    return bad


def law_violations(ground: GroundSet, subsets: Optional[Sequence[ComplementedSubset]] = None) -> list:
    """Exhaustively test the complemented-subset laws; return violations.

    Checked: involution, both De Morgan laws, both distributive laws,
    commutativity and associativity of meet and join, the characteristic
    function identities, and that ``<=`` agrees with the pointwise order of
    characteristic functions on positive and negative parts.
    """
    cs = list(all_complemented_subsets(ground) if subsets is None else subsets)
    chi = {c: characteristic(c) for c in cs}
    bad = []
    for a in cs:
        if complement(complement(a)) != a:
            bad.append(("involution", str(a)))
        if characteristic(complement(a)) != chi[a].map(lambda t: 1 - t):
            bad.append(("chi-complement", str(a)))
        for b in cs:
            ab_meet, ab_join = meet(a, b), join(a, b)
            if ab_meet != meet(b, a) or ab_join != join(b, a):
                bad.append(("commutative", str(a), str(b)))
            if complement(ab_meet) != join(complement(a), complement(b)):
                bad.append(("de-morgan-meet", str(a), str(b)))
            if complement(ab_join) != meet(complement(a), complement(b)):
                bad.append(("de-morgan-join", str(a), str(b)))
            if characteristic(ab_meet) != chi[a].minimum(chi[b]):
                bad.append(("chi-meet", str(a), str(b)))
            if characteristic(ab_join) != chi[a].maximum(chi[b]):
                bad.append(("chi-join", str(a), str(b)))
            if minus(a, b) != meet(a, complement(b)):
                bad.append(("minus", str(a), str(b)))
            leq = cs_leq(a, b)
            expected = (a.pos & ~b.pos) == 0 and (b.neg & ~a.neg) == 0
            if leq != expected:
                bad.append(("leq", str(a), str(b)))
    # Triples go through lookup tables built from the operations above.
    pos = {c: k for k, c in enumerate(cs)}
    try:
        mt = [[pos[meet(a, b)] for b in cs] for a in cs]
        jt = [[pos[join(a, b)] for b in cs] for a in cs]
    except KeyError:
        bad.append(("not-closed",))
        return bad
    rng = range(len(cs))
    for a in rng:
        ma, ja = mt[a], jt[a]
        for b in rng:
            mab, jab, mb, jb = ma[b], ja[b], mt[b], jt[b]
            for c in rng:
                if ma[mb[c]] != mt[mab][c]:
                    bad.append(("assoc-meet", str(cs[a]), str(cs[b]), str(cs[c])))
                if ja[jb[c]] != jt[jab][c]:
                    bad.append(("assoc-join", str(cs[a]), str(cs[b]), str(cs[c])))
                if ma[jb[c]] != jt[mab][ma[c]]:
                    bad.append(("distrib-meet", str(cs[a]), str(cs[b]), str(cs[c])))
                if ja[mb[c]] != mt[jab][ja[c]]:
                    bad.append(("distrib-join", str(cs[a]), str(cs[b]), str(cs[c])))
    return bad
