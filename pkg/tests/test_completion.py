import random
from fractions import Fraction

import pytest

from constructive_measure.complemented import GroundSet, IndicatorFn
from constructive_measure.completion import (
    IntEquality,
    MissingCertificate,
    UnsoundModulus,
    abs_mass,
    check_pis_completion,
    compress,
    compression_bound_holds,
    embed,
    eq_int,
    eval_rep,
    finite,
    finite_function,
    geometric,
    integral_rep,
    lebesgue_sum,
    limit_of_cauchy,
    norm1,
    random_finite_rep,
    rep_abs,
    rep_join,
    rep_meet,
    rep_meet_one,
    rep_min_const,
)
from constructive_measure.premeasure import dirac, weighted_counting
from constructive_measure.reals import Ordering, certify_le, compare_at, dyadic
from constructive_measure.report import CheckConfig
from constructive_measure.simple import DomainError, SimpleFunction, integral, scalar_mul, sf_equal

X3 = GroundSet.of("abc")
D = dirac(X3, "a")
W = weighted_counting(X3, {"a": 1, "b": Fraction(1, 2), "c": 3})


def sf(space, *terms):
    return SimpleFunction.of(space, [(Fraction(a), IndicatorFn.from_bits(X3, b)) for a, b in terms])


def pointwise_sum(rep):
    """Oracle: add up term values point by point, straight from the stored terms."""
    out = [Fraction(0)] * 3
    for n in range(1, rep.support + 1):
        for k in range(3):
            out[k] += rep.term(n).function.values[k]
    return out


def test_embed_integral_is_exact():
    v = sf(W, (2, "110"), (-1, "011"))
    assert integral_rep(embed(v)).exact == integral(v) == 2 * 1 + 1 * Fraction(1, 2) - 1 * 3
    assert norm1(embed(v)).exact == 2 + Fraction(1, 2) + 3


def test_finite_function_matches_oracle():
    rng = random.Random(3)
    for _ in range(100):
        a = random_finite_rep(W, rng)
        assert list(finite_function(a).values) == pointwise_sum(a)


def test_lattice_operations_pointwise():
    rng = random.Random(8)
    for _ in range(60):
        a, b = random_finite_rep(W, rng), random_finite_rep(W, rng)
        ga, gb = pointwise_sum(a), pointwise_sum(b)
        assert list(finite_function(rep_abs(a)).values) == [abs(t) for t in ga]
        assert list(finite_function(rep_meet_one(a)).values) == [min(t, 1) for t in ga]
        assert list(finite_function(rep_join(a, b)).values) == [max(s, t) for s, t in zip(ga, gb)]
        assert list(finite_function(rep_meet(a, b)).values) == [min(s, t) for s, t in zip(ga, gb)]
        assert list(finite_function(rep_min_const(a, 2)).values) == [min(t, 2) for t in ga]


def test_geometric_integral_and_norm():
    base = sf(D, (1, "111"))
    g = geometric(base, Fraction(1, 2))
    for p in (0, 8, 16, 24):
        assert abs(integral_rep(g).approx_to(p) - 1) <= dyadic(p)
    alt = geometric(base, Fraction(-1, 2))
    # sum (-1/2)^n = -1/3, and the 1-norm of the limit function is 1/3.
    assert compare_at(integral_rep(alt), Fraction(-1, 3), 16) is Ordering.WITHIN
    assert compare_at(norm1(alt), Fraction(1, 3), 12) is Ordering.WITHIN


def test_geometric_first_exponent():
    base = sf(D, (1, "111"))
    g = geometric(base, Fraction(1, 2), first=3)
    assert g.term(1)("a") == Fraction(1, 8)
    assert compare_at(integral_rep(g), Fraction(1, 4), 16) is Ordering.WITHIN
    with pytest.raises(ValueError):
        geometric(base, Fraction(1, 2), first=0)


def test_geometric_pointwise_value():
    g = geometric(sf(W, (1, "111")), Fraction(1, 2))
    for x in "abc":
        assert compare_at(eval_rep(g, x), 1, 20) is Ordering.WITHIN


def test_small_representation_examples():
    v = sf(W, (3, "111"))
    m = rep_meet_one(embed(v))
    assert list(finite_function(m).values) == [1, 1, 1]
    a = finite(W, [sf(W, (1, "100")), sf(W, (-2, "011"))])
    assert finite_function(a + finite(W, [])) == finite_function(a)
    assert abs(integral_rep(a).exact) <= norm1(a).exact
    assert eval_rep(embed(v), "b").exact == 3


def test_geometric_rejects_ratio_one():
    with pytest.raises(ValueError):
        geometric(sf(D, (1, "111")), 1)


def test_zero_ratio_is_finite():
    g = geometric(sf(D, (3, "100")), 0)
    assert g.support == 1 and integral_rep(g).exact == 0


def test_eq_int_three_values():
    v = sf(W, (1, "110"), (2, "011"))
    tiny = sf(W, (Fraction(1, 2**20), "111"))
    assert eq_int(embed(v), finite(W, [sf(W, (1, "110")), sf(W, (2, "011"))]), 16) is IntEquality.EQUAL
    assert eq_int(embed(v), embed(v) + embed(tiny), 16) is IntEquality.WITHIN
    assert eq_int(embed(v), embed(v) + embed(tiny), 24) is IntEquality.DISTINCT
    assert eq_int(embed(v), embed(scalar_mul(2, v)), 0) is IntEquality.DISTINCT


def test_eq_int_on_an_infinite_representation():
    g = geometric(sf(D, (1, "111")), Fraction(1, 2))
    assert eq_int(g, embed(sf(D, (1, "111"))), 16) is IntEquality.WITHIN
    assert eq_int(g, embed(sf(D, (2, "111"))), 16) is IntEquality.DISTINCT


def test_norm_ignores_null_points():
    # Dirac at a: disagreement only at b and c has norm 0.
    v, w = sf(D, (1, "100")), sf(D, (1, "111"))
    assert eq_int(embed(v), embed(w), 30) is IntEquality.EQUAL


def test_compress_preserves_integral_exactly_on_finite_input():
    rng = random.Random(12)
    for _ in range(40):
        a = random_finite_rep(W, rng, 4)
        for n in (0, 3):
            b = compress(a, n)
            assert integral_rep(b).exact == integral_rep(a).exact
            assert abs_mass(b).exact <= norm1(a).exact + dyadic(n)
            assert finite_function(b) == finite_function(a)


def test_compress_geometric_bound():
    g = geometric(sf(D, (1, "111")), Fraction(1, 2))
    for n in range(0, 8):
        assert compression_bound_holds(g, n, 20)
        assert compare_at(integral_rep(compress(g, n)), integral_rep(g), 20) is Ordering.WITHIN


def test_lebesgue_sum_of_halvings():
    v = sf(D, (2, "100"), (Fraction(-1, 2), "011"))

    def gamma(n):
        return embed(scalar_mul(Fraction(1, 2**n), v))

    # sum_{n > N} norm1(gamma(n)) = 2 * 2**-N, so N = p + 1 works.
    s = lebesgue_sum(gamma, lambda p: p + 1, pointwise_outer=lambda x, p: p + 2)
    for p in (4, 10):
        assert compare_at(integral_rep(s), integral(v), p) is Ordering.WITHIN
    assert compare_at(eval_rep(s, "a"), 2, 10) is Ordering.WITHIN
    assert compare_at(eval_rep(s, "b"), Fraction(-1, 2), 10) is Ordering.WITHIN


def test_lebesgue_sum_halvings_partial_norms():
    v = sf(D, (2, "100"), (Fraction(-1, 2), "011"))
    s = lebesgue_sum(lambda n: embed(scalar_mul(Fraction(1, 2**n), v)), lambda p: p + 1)
    for big_n in (1, 4, 8, 12):
        head = finite(D, [scalar_mul(Fraction(1, 2**n), v) for n in range(1, big_n + 1)])
        # The rest is sum_{n > N} 2**-n v, whose norm is 2**-N * norm1(v) = 2**-N * 2.
        bound = dyadic(big_n) * 2 + dyadic(big_n + 4)
        assert certify_le(norm1(s - head), bound, big_n + 6)


def test_lebesgue_sum_degenerate_inputs():
    v = sf(W, (1, "110"), (-2, "001"))
    zero = lebesgue_sum(lambda n: finite(W, []), lambda p: 0)
    assert compare_at(integral_rep(zero), 0, 12) is Ordering.WITHIN
    assert eq_int(zero, finite(W, []), 12) is IntEquality.WITHIN
    single = lebesgue_sum(lambda n: embed(v) if n == 1 else finite(W, []), lambda p: 1)
    assert eq_int(single, embed(v), 12) is IntEquality.WITHIN
    assert compare_at(integral_rep(single), integral(v), 12) is Ordering.WITHIN


def test_lebesgue_sum_without_pointwise_certificate():
    v = sf(D, (1, "111"))
    s = lebesgue_sum(lambda n: embed(scalar_mul(Fraction(1, 2**n), v)), lambda p: p + 1)
    with pytest.raises(MissingCertificate):
        eval_rep(s, "a")


def test_eval_outside_domain():
    v = sf(D, (1, "111"))
    s = lebesgue_sum(lambda n: embed(scalar_mul(Fraction(1, 2**n), v)), lambda p: p + 1, domain=0b011)
    with pytest.raises(DomainError):
        eval_rep(s, "c")


def test_limit_of_geometric_cauchy_sequence():
    v = sf(D, (2, "100"), (Fraction(-1, 2), "011"))

    def gamma(n):
        return embed(scalar_mul(1 - Fraction(1, 2**n), v))

    alpha, m2 = limit_of_cauchy(gamma, lambda p: p + 2)
    for p in (0, 4, 8):
        assert certify_le(norm1(alpha - embed(v)), dyadic(p), p + 2)
        assert certify_le(norm1(alpha - gamma(m2(p))), dyadic(p), p + 2)


def test_limit_with_coarser_modulus_agrees():
    v = sf(D, (1, "111"))

    def gamma(n):
        return embed(scalar_mul(1 - Fraction(1, 2**n), v))

    a1, _ = limit_of_cauchy(gamma, lambda p: p + 2)
    a2, m2 = limit_of_cauchy(gamma, lambda p: 2 * p + 3)
    assert m2(4) >= 11
    for p in range(0, 10, 3):
        assert certify_le(norm1(a1 - a2), dyadic(p), p + 2)


def test_limit_of_partial_sums_matches_lebesgue_sum():
    g = geometric(sf(D, (1, "110")), Fraction(1, 2))

    def partial(n):
        return finite(D, g.terms(n))

    # norm1(partial(n) - partial(m)) <= sum_{k > n} 2**-k = 2**-n.
    lim, _ = limit_of_cauchy(partial, lambda p: p)
    direct = lebesgue_sum(lambda n: embed(g.term(n)), lambda p: p)
    for p in (0, 4, 8):
        assert certify_le(norm1(lim - direct), dyadic(p), p + 2)
    assert compare_at(integral_rep(lim), 1, 8) is Ordering.WITHIN


def test_limit_of_constant_sequence_is_exact():
    v = sf(W, (2, "100"), (Fraction(-1, 3), "011"))
    alpha, _ = limit_of_cauchy(lambda n: embed(v), lambda p: p + 1)
    assert sf_equal(alpha.term(1), v)
    for m in range(2, 200):
        t = alpha.term(m)
        assert all(c == 0 for c, _ in t.terms)


def test_unsound_modulus_is_rejected():
    v = sf(D, (1, "111"))
    with pytest.raises(UnsoundModulus):
        limit_of_cauchy(lambda n: embed(scalar_mul(n, v)), lambda p: p)


def test_representations_over_different_spaces():
    with pytest.raises(ValueError):
        embed(sf(D, (1, "100"))) + embed(sf(W, (1, "100")))


def test_terms_are_one_based():
    with pytest.raises(IndexError):
        embed(sf(D, (1, "100"))).term(0)


@pytest.mark.parametrize("space", [D, W], ids=["dirac", "weighted"])
def test_check_pis_completion(space):
    report = check_pis_completion(space, CheckConfig(samples=40))
    assert report.ok, report.to_json()
    ids = {e.id for e in report.entries}
    assert ids == {"PIS1", "PIS2", "PIS3", "PIS4", "lemmas", "density", "geometric"}


def test_check_pis_completion_catches_broken_measure():
    broken = D.with_measure(lambda i: Fraction(1))
    assert not check_pis_completion(broken, CheckConfig(samples=20)).ok
