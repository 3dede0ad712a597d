import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import (ExactPhase, GroupSpec, add, char_eval, character_sum, dot, exponent_matrix, fourier_matrix,
                     mod_inverse, ring_mul)
from errors import DomainError, StructuralError

groups = st.lists(st.integers(min_value=2, max_value=6), min_size=1, max_size=3).map(lambda m: GroupSpec(tuple(m)))


def element_of(group):
    return st.tuples(*(st.integers(min_value=0, max_value=n - 1) for n in group.moduli)).map(group.element)


@pytest.mark.parametrize("moduli, a, b, expected", [
    ((2, 3), (1, 2), (1, 2), (0, 1)),
    ((5,), (3,), (4,), (2,)),
    ((4, 6), (3, 5), (0, 0), (3, 5)),
])
def test_add(moduli, a, b, expected):
    group = GroupSpec(moduli)
    assert add(group.element(a), group.element(b)).residues == expected


@pytest.mark.parametrize("moduli, a, b, expected", [
    ((2, 3), (1, 2), (1, 2), (1, 1)),
    ((5,), (3,), (4,), (2,)),
])
def test_ring_mul(moduli, a, b, expected):
    group = GroupSpec(moduli)
    assert ring_mul(group.element(a), group.element(b)).residues == expected


def test_unit_is_multiplicative_identity():
    group = GroupSpec((3, 4))
    for g in group.elements():
        assert g * group.unit == g
        assert g + group.zero == g


def test_mismatched_groups_are_rejected():
    a = GroupSpec((2,)).element(1)
    b = GroupSpec((3,)).element(1)
    with pytest.raises(StructuralError):
        add(a, b)
    with pytest.raises(StructuralError):
        ring_mul(a, b)
    with pytest.raises(StructuralError):
        char_eval(a, b)


def test_group_shape():
    group = GroupSpec((4, 6))
    assert group.order == 24
    assert group.phase_order == 12
    assert group.order % group.phase_order == 0
    assert len(group.elements()) == 24
    assert [group.index(g) for g in group.elements()] == list(range(24))


def test_large_group_is_built_without_listing_elements():
    group = GroupSpec((100000, 100000))
    assert group.order == 10 ** 10
    assert group.index(group.element((3, 4))) == 300004
    assert group.index(group.element((-1, -1))) == group.order - 1


@pytest.mark.parametrize("moduli", [(), (1,), (3, 0)])
def test_bad_moduli(moduli):
    with pytest.raises(DomainError):
        GroupSpec(moduli)


def test_char_eval_examples():
    z4 = GroupSpec.cyclic(4)
    phase = char_eval(z4.element(1), z4.element(3))
    assert (phase.exponent, phase.order) == (3, 4)
    assert phase.to_complex() == pytest.approx(-1j)

    assert char_eval(z4.zero, z4.element(2)).exponent == 0

    klein = GroupSpec((2, 2))
    phase = char_eval(klein.element((1, 1)), klein.element((1, 1)))
    assert (phase.exponent, phase.order) == (0, 2)


def test_mixed_moduli_share_one_phase_order():
    group = GroupSpec((2, 3))
    phase = char_eval(group.element((1, 1)), group.element((1, 1)))
    # 3*1*1 + 2*1*1 over lcm 6
    assert (phase.exponent, phase.order) == (5, 6)


@pytest.mark.parametrize("a, p, expected", [(3, 7, 5), (1, 11, 1), (4, 5, 4)])
def test_mod_inverse(a, p, expected):
    assert mod_inverse(a, p) == expected
    assert a * expected % p == 1


def test_mod_inverse_rejects_zero_and_composites():
    with pytest.raises(DomainError):
        mod_inverse(7, 7)
    with pytest.raises(DomainError):
        mod_inverse(3, 8)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_character_is_a_homomorphism(data):
    group = data.draw(groups)
    r, g, h = (data.draw(element_of(group)) for _ in range(3))
    assert char_eval(r, g + h) == char_eval(r, g) * char_eval(r, h)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_character_orthogonality(data):
    group = data.draw(groups)
    r = data.draw(element_of(group))
    total = character_sum(r, group)
    if r.is_zero():
        assert total == pytest.approx(group.order)
    else:
        assert abs(total) < 1e-9


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(1, 12))
def test_phase_multiplication_is_exact(a, b, c, order):
    x, y, z = ExactPhase(a, order), ExactPhase(b, order), ExactPhase(c, order)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x * x.conjugate()).is_one()
    assert cmath.isclose((x * y).to_complex(), x.to_complex() * y.to_complex(), abs_tol=1e-12)


@pytest.mark.parametrize("moduli", [(2,), (5,), (2, 2), (2, 3), (4, 2)])
def test_fourier_matrix_is_unitary(moduli):
    F = fourier_matrix(GroupSpec(moduli))
    assert np.allclose(F @ F.conj().T, np.eye(F.shape[0]), atol=1e-12)


def test_exponent_matrix_matches_char_eval():
    group = GroupSpec((2, 3))
    left = group.vectors(2)[:7]
    right = group.vectors(2)[10:15]
    E = exponent_matrix(group, left, right)
    for i, u in enumerate(left):
        for j, v in enumerate(right):
            expected = char_eval(u[0], v[0]) * char_eval(u[1], v[1])
            assert E[i, j] == expected.exponent


def test_exponent_matrix_rejects_ragged_vectors():
    group = GroupSpec.cyclic(3)
    with pytest.raises(StructuralError):
        exponent_matrix(group, [(group.unit,)], [(group.unit, group.unit)])


def test_vectors_are_lexicographic():
    group = GroupSpec.cyclic(3)
    vectors = group.vectors(2)
    assert len(vectors) == 9
    assert vectors[0] == (group.zero, group.zero)
    assert [group.vector_index(v) for v in vectors] == list(range(9))


def test_dot():
    group = GroupSpec.cyclic(5)
    u = [group.element(2), group.element(3)]
    v = [group.element(4), group.element(1)]
    assert dot(u, v) == group.element(1)
    with pytest.raises(StructuralError):
        dot(u, v[:1])
