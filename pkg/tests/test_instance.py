import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import GroupSpec
from errors import CapacityError, DomainError, StructuralError
from instance import (OracleTable, QueryPair, as_identification, make_custom, make_evaluation, make_extrapolation,
                      make_interpolation, make_interrogation, make_summation, matrix_B, matrix_C,
                      oracle_from_coefficients, sample_oracle, verify_free)


def residues(table):
    return [table(x).residues[0] for x in table.domain]


def matrix_residues(matrix):
    return [[g.residues[0] for g in row] for row in matrix]


def test_summation_basis(z2):
    inst = make_summation(2, z2)
    assert inst.s == 1 and inst.t == 1
    assert residues(inst.kernel_basis[0]) == [1, 1]
    assert residues(inst.quotient_basis[0]) == [1, 0]

    assert make_summation(3, z2).s == 2
    assert residues(make_summation(4, GroupSpec.cyclic(3)).kernel_basis[1]) == [2, 0, 1, 0]


def test_summation_needs_two_points(z2):
    with pytest.raises(DomainError):
        make_summation(1, z2)


def test_interrogation_basis(z2):
    assert (make_interrogation(3, z2, {0, 1}).s, make_interrogation(3, z2, {0, 1}).t) == (1, 2)
    assert (make_interrogation(2, z2, {0, 1}).s, make_interrogation(2, z2, {0, 1}).t) == (0, 2)
    inst = make_interrogation(4, GroupSpec.cyclic(3), {2})
    assert residues(inst.quotient_basis[0]) == [0, 0, 1, 0]


@pytest.mark.parametrize("targets", [set(), {5}, {-1}])
def test_interrogation_rejects_bad_targets(z2, targets):
    with pytest.raises(DomainError):
        make_interrogation(3, z2, targets)


def test_interpolation_basis():
    inst = make_interpolation(3, 1)
    assert matrix_residues(matrix_C(inst, (0, 1))) == [[1, 1], [0, 1]]
    assert matrix_residues(matrix_C(inst, (0, 2))) == [[1, 1], [0, 2]]
    assert make_interpolation(5, 2).t == 3
    assert residues(make_interpolation(3, 2).quotient_basis[2]) == [0, 1, 1]
    assert matrix_B(inst, (0, 1)) == []


@pytest.mark.parametrize("p, d", [(4, 1), (3, 0)])
def test_interpolation_rejects_bad_parameters(p, d):
    with pytest.raises(DomainError):
        make_interpolation(p, d)


def test_evaluation_basis():
    inst = make_evaluation(5, 2, {0, 1})
    assert inst.s == 1 and inst.t == 2
    # Q(x) = x(x - 1)
    assert residues(inst.kernel_basis[0]) == [0, 0, 2, 1, 2]
    assert residues(inst.quotient_basis[0]) == [1, 0, 4, 3, 2]
    assert residues(inst.quotient_basis[1]) == [0, 1, 2, 3, 4]

    assert make_evaluation(5, 4, {0, 1, 2}).s == 2
    single = make_evaluation(3, 2, {0})
    assert [residues(t) for t in single.kernel_basis] == [[0, 1, 2], [0, 1, 1]]


def test_evaluation_quotient_coordinates_are_target_values():
    inst = make_evaluation(5, 3, {1, 3})
    F = inst.group
    for a, b in itertools.product(range(5), repeat=2):
        table = oracle_from_coefficients(inst, (F.element(2), F.element(4)), (F.element(a), F.element(b)))
        assert table(1).residues[0] == a
        assert table(3).residues[0] == b


@pytest.mark.parametrize("targets", [[0, 0], [7], [0, 1, 2]])
def test_evaluation_rejects_bad_targets(targets):
    with pytest.raises(DomainError):
        make_evaluation(5, 2, targets)


def test_extrapolation_basis():
    inst = make_extrapolation(3, 1)
    assert inst.domain == (1, 2)
    assert matrix_residues(matrix_B(inst, (1, 2))) == [[1, 2]]
    assert matrix_residues(matrix_C(inst, (1, 2))) == [[1, 1]]
    assert (make_extrapolation(5, 2).s, make_extrapolation(5, 2).t) == (2, 1)
    assert make_extrapolation(7, 3).quotient_order == 7


def test_matrix_examples(z2):
    assert matrix_residues(matrix_B(make_summation(2, z2), (0, 1))) == [[1, 1]]
    assert matrix_residues(matrix_C(make_interrogation(3, z2, {0}), (1, 2))) == [[0, 0]]
    assert matrix_residues(matrix_C(make_extrapolation(5, 2), (1, 2, 4))) == [[1, 1, 1]]


def test_matrix_rejects_points_outside_domain():
    with pytest.raises(DomainError):
        matrix_B(make_extrapolation(3, 1), (0,))


def test_oracle_from_coefficients_examples():
    inst = make_interpolation(3, 1)
    F = inst.group
    assert residues(oracle_from_coefficients(inst, (), (F.element(1), F.element(2)))) == [1, 0, 2]

    inst = make_extrapolation(3, 1)
    assert residues(oracle_from_coefficients(inst, (F.element(1),), (F.element(2),))) == [0, 1]
    assert residues(oracle_from_coefficients(inst, (F.zero,), (F.zero,))) == [0, 0]


def test_oracle_from_coefficients_checks_lengths():
    inst = make_extrapolation(3, 1)
    with pytest.raises(StructuralError):
        oracle_from_coefficients(inst, (), (inst.group.unit,))


def test_sample_oracle_is_seeded_and_consistent():
    inst = make_summation(4, GroupSpec((2, 3)))
    first = sample_oracle(inst, 11)
    assert first == sample_oracle(inst, 11)
    beta, gamma, table = first
    assert table == oracle_from_coefficients(inst, beta, gamma)


@pytest.mark.parametrize("inst", [
    make_summation(3, GroupSpec.cyclic(3)),
    make_summation(3, GroupSpec((2, 2))),
    make_interrogation(4, GroupSpec.cyclic(2), {1, 3}),
    make_interpolation(3, 2),
    make_interpolation(5, 2),
    make_evaluation(5, 3, {0, 4}),
    make_extrapolation(5, 3),
], ids=lambda inst: inst.label)
def test_generators_are_free(inst):
    assert verify_free(inst)


def test_dependent_basis_is_not_free(z2):
    inst = make_custom((0, 1), z2, [[1, 0], [1, 0]], [[0, 1]])
    assert not verify_free(inst)


def test_extrapolation_past_the_field_is_not_free():
    # x^2 = 1 on F_3 minus zero
    assert not verify_free(make_extrapolation(3, 2))


def test_verify_free_capacity():
    with pytest.raises(CapacityError):
        verify_free(make_interpolation(5, 4), capacity=100)


@pytest.mark.parametrize("inst", [
    make_extrapolation(5, 2),
    make_evaluation(5, 2, {2}),
    make_summation(3, GroupSpec.cyclic(3)),
], ids=lambda inst: inst.label)
def test_cosets_follow_quotient_coefficients(inst):
    group = inst.group
    kernel_span = {
        tuple(oracle_from_coefficients(inst, beta, (group.zero,) * inst.t).values)
        for beta in group.vectors(inst.s)
    }
    oracles = [(gamma, oracle_from_coefficients(inst, beta, gamma))
               for beta in group.vectors(inst.s) for gamma in group.vectors(inst.t)]
    for (gamma, a), (other_gamma, b) in itertools.combinations(oracles[::3], 2):
        difference = tuple(x - y for x, y in zip(a.values, b.values))
        assert (difference in kernel_span) == (gamma == other_gamma)


def test_query_pair_validation(z3):
    with pytest.raises(DomainError):
        QueryPair((2, 1), (z3.unit, z3.unit))
    with pytest.raises(StructuralError):
        QueryPair((1, 2), (z3.unit,))


def test_canonical_merges_repeated_points(z3):
    pair = QueryPair.canonical((2, 0, 2), (z3.element(1), z3.element(1), z3.element(1)))
    assert pair.points == (0, 2)
    assert [r.residues[0] for r in pair.chars] == [1, 2]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 2)), max_size=6))
def test_canonical_is_sorted_and_distinct(raw):
    group = GroupSpec.cyclic(3)
    pair = QueryPair.canonical([x for x, _ in raw], [group.element(r) for _, r in raw])
    assert list(pair.points) == sorted(set(x for x, _ in raw))
    for x, r in zip(pair.points, pair.chars):
        assert r.residues[0] == sum(c for y, c in raw if y == x) % 3


def test_identification_moves_kernel_into_quotient():
    inst = make_extrapolation(5, 2)
    ident = as_identification(inst)
    assert ident.s == 0 and ident.t == 3
    assert ident.quotient_basis == inst.kernel_basis + inst.quotient_basis
    assert ident.quotient_order == 125


def test_custom_tables_must_cover_domain(z2):
    with pytest.raises(DomainError):
        make_custom((0, 1, 2), z2, [], [[1, 0]])


def test_custom_domain_must_not_be_empty(z2):
    with pytest.raises(DomainError):
        make_custom((), z2, [], [[]])
    with pytest.raises(DomainError):
        OracleTable((), ()).group
