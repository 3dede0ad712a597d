import math
from fractions import Fraction

import pytest

from algebra import GroupSpec
from counting import count_optimal, hz_of_pair
from errors import ConsistencyError, DomainError, RegimeError
from formulas import (BoundBracket, bound_for, evaluation_bound, extrapolation_bound, extrapolation_tight_construction,
                      interpolation_bound, interpolation_collision_free, interrogation_bound, summation_bound,
                      summation_perfect_queries)
from instance import as_identification, make_custom, make_evaluation, make_extrapolation, make_interpolation


@pytest.mark.parametrize("M, q, N, expected", [
    (2, 1, 2, Fraction(1)),
    (4, 2, 2, Fraction(1)),
    (2, 1, 4, Fraction(1, 2)),
    (3, 1, 2, Fraction(1, 2)),
    (5, 5, 7, Fraction(1)),
    (6, 4, 5, Fraction(3, 5)),
])
def test_summation_bound(M, q, N, expected):
    bracket = summation_bound(M, q, N)
    assert bracket.exact
    assert bracket.lower == expected


def test_summation_bound_rejects_bad_input():
    with pytest.raises(DomainError):
        summation_bound(3, 4, 2)
    with pytest.raises(DomainError):
        summation_bound(3, 1, 1)


@pytest.mark.parametrize("M, N, expected", [(4, 2, 2), (3, 2, 2), (3, 3, 2), (5, 4, 4)])
def test_summation_perfect_queries(M, N, expected):
    assert summation_perfect_queries(M, N) == expected


def test_perfect_queries_is_the_first_certain_query_count():
    for M in range(1, 9):
        for N in range(2, 6):
            first = next(q for q in range(M + 1) if summation_bound(M, q, N).lower == 1)
            assert summation_perfect_queries(M, N) == first, (M, N)


def test_interrogation_bound():
    assert interrogation_bound(3, 2, 2, 1).lower == Fraction(3, 4)
    assert interrogation_bound(3, 2, 2, 2).lower == Fraction(1)
    assert interrogation_bound(5, 3, 2, 0).lower == Fraction(1, 9)
    with pytest.raises(DomainError):
        interrogation_bound(3, 2, 4, 1)


@pytest.mark.parametrize("d, q, p, lower, upper", [
    (1, 1, 3, Fraction(2, 3), Fraction(1)),
    (2, 1, 5, Fraction(1, 125), Fraction(1, 5)),
    (2, 2, 7, Fraction(2, 7), Fraction(1)),
    (3, 2, 5, Fraction(1, 5), Fraction(1, 2)),
])
def test_interpolation_bound(d, q, p, lower, upper):
    bracket = interpolation_bound(d, q, p)
    assert (bracket.lower, bracket.upper) == (lower, upper)
    assert not bracket.exact


def test_interpolation_bound_clamps_to_random_guessing():
    bracket = interpolation_bound(2, 2, 5)
    assert bracket.lower == Fraction(1, 125)
    assert "clamped" in bracket.regime


@pytest.mark.parametrize("d, q, p, expected", [
    (1, 1, 3, Fraction(7, 9)),
    (2, 1, 3, Fraction(7, 27)),
    (2, 1, 5, Fraction(21, 125)),
    (3, 2, 5, Fraction(181, 625)),
])
def test_interpolation_collision_free(d, q, p, expected):
    assert interpolation_collision_free(d, q, p).lower == expected


def test_collision_free_needs_small_q():
    with pytest.raises(RegimeError):
        interpolation_collision_free(1, 2, 3)


@pytest.mark.parametrize("p, d", [(3, 1), (3, 2), (5, 1), (5, 2), (5, 3), (7, 2), (7, 3)])
def test_collision_free_value_is_the_count(p, d):
    inst = make_interpolation(p, d)
    for q in range(1, (d + 1) // 2 + 1):
        assert count_optimal(inst, q).probability == interpolation_collision_free(d, q, p).lower


def test_evaluation_bound():
    assert evaluation_bound(4, 0, 5) == BoundBracket.point(Fraction(1, 5), "evaluation, random guess")
    clamped = evaluation_bound(2, 1, 7)
    assert (clamped.lower, clamped.upper) == (Fraction(1, 49), Fraction(1))
    assert "clamped" in clamped.regime

    large = evaluation_bound(2, 1, 10007, k=3)
    assert large.lower == Fraction(1, 10007 ** 3)
    assert large.upper == pytest.approx(2 * math.e ** 2 / 10007)


def test_evaluation_bound_regimes():
    with pytest.raises(RegimeError):
        evaluation_bound(2, 2, 5)
    with pytest.raises(RegimeError):
        evaluation_bound(4, 1, 5, k=1)
    with pytest.raises(DomainError):
        evaluation_bound(2, 1, 9)


@pytest.mark.parametrize("d, q, p, expected", [
    (1, 1, 3, Fraction(2, 3)),
    (1, 1, 5, Fraction(4, 5)),
    (3, 2, 5, Fraction(2, 5)),
    (2, 1, 5, Fraction(1, 5)),
    (3, 2, 11, Fraction(5, 11)),
])
def test_extrapolation_bound_exact(d, q, p, expected):
    bracket = extrapolation_bound(d, q, p)
    assert bracket.exact
    assert bracket.lower == expected


def test_extrapolation_bound_without_divisibility():
    bracket = extrapolation_bound(5, 3, 11)
    assert (bracket.lower, bracket.upper, bracket.exact) == (Fraction(1, 11), Fraction(3, 11), False)


def test_extrapolation_above_threshold():
    bracket = extrapolation_bound(1, 2, 7)
    assert (bracket.lower, bracket.upper) == (Fraction(3, 7), Fraction(1))
    assert extrapolation_bound(3, 3, 7).lower == Fraction(1, 7)


def test_bracket_validation():
    with pytest.raises(ConsistencyError):
        BoundBracket(Fraction(1, 2), Fraction(1, 3), False, "inverted")
    with pytest.raises(ConsistencyError):
        BoundBracket(Fraction(1, 3), Fraction(1, 2), True, "exact")
    with pytest.raises(ConsistencyError):
        BoundBracket(Fraction(0), Fraction(3, 2), False, "too large")


def test_bracket_containment():
    exact = BoundBracket.point(Fraction(2, 3), "x")
    assert exact.contains(Fraction(2, 3))
    assert not exact.contains(Fraction(2, 3) + Fraction(1, 10 ** 12), tolerance=1e-9)
    assert exact.contains(0.6666666667, tolerance=1e-9)
    loose = BoundBracket(Fraction(1, 5), Fraction(1, 2), False, "y")
    assert loose.contains(Fraction(1, 5)) and loose.contains(Fraction(1, 2))
    assert not loose.contains(Fraction(51, 100))


def test_bracket_containment_is_exact_at_rational_endpoints():
    loose = BoundBracket(Fraction(1, 125), Fraction(1, 5), False, "z")
    assert loose.contains(Fraction(1, 125), tolerance=0.0)
    assert loose.contains(Fraction(1, 5), tolerance=0.0)
    assert not loose.contains(Fraction(1, 5) + Fraction(1, 10 ** 15), tolerance=1e-9)
    assert loose.contains(0.2 + 1e-12, tolerance=1e-9)
    assert not loose.contains(0.2 + 1e-6, tolerance=1e-9)


def _grid():
    cases = []
    for p in (3, 5, 7):
        for d in range(1, 5):
            if d < p:
                cases += [(make_interpolation(p, d), q) for q in range(0, min(3, p) + 1)]
                cases += [(make_evaluation(p, d, range(q + 1)), q) for q in range(0, d // 2 + 1) if q + 1 <= d]
            if d < p - 1:
                cases += [(make_extrapolation(p, d), q) for q in range(0, min(3, p - 1) + 1)]
    return cases


@pytest.mark.parametrize("case", _grid(), ids=lambda case: f"{case[0].label}-q{case[1]}")
def test_counting_value_sits_in_the_bracket(case):
    inst, q = case
    bracket = bound_for(inst, q)
    value = count_optimal(inst, q).probability
    assert bracket.contains(value, 1e-9), (bracket, value)
    if bracket.exact:
        assert value == bracket.lower


@pytest.mark.parametrize("p, q", [(5, 1), (5, 2), (7, 1), (7, 2), (7, 3)])
def test_tight_construction_reaches_the_threshold(p, q):
    h, pairs, outputs = extrapolation_tight_construction(p, q)
    inst = make_extrapolation(p, 2 * q - 1)
    assert len(pairs) == len(set(outputs)) == (p - 1) // q
    for pair, output in zip(pairs, outputs):
        pair_h, pair_z = hz_of_pair(inst, pair)
        assert pair_h == h
        assert pair_z == (inst.group.element(output),)
    assert count_optimal(inst, q).probability == Fraction(len(outputs), p)


def test_tight_construction_needs_divisibility():
    with pytest.raises(DomainError):
        extrapolation_tight_construction(7, 4)
    with pytest.raises(DomainError):
        extrapolation_tight_construction(7, 2, x=7)


def test_bound_for_dispatch():
    assert bound_for(make_extrapolation(3, 1), 1).lower == Fraction(2, 3)
    assert bound_for(make_evaluation(5, 3, {0, 1}), 1) == evaluation_bound(3, 1, 5, 2)


def test_bound_for_has_no_generic_formula(z2):
    with pytest.raises(RegimeError):
        bound_for(make_custom((0, 1), z2, [[1, 1]], [[1, 0]]), 1)
    with pytest.raises(RegimeError):
        bound_for(as_identification(make_extrapolation(3, 1)), 1)
