from fractions import Fraction
import numpy as np
import pytest

from src.exactla.errors import DimensionMismatchError, NotInSpanError, ParityError
from src.exactla.graded import GradedMap, GradedSpace, TensorElement, block_diagonal
from src.exactla.rational import (fmt_rational, is_zero, koszul_sign, parse_rational, permutation_sign,
                                  qarray, qeye, qvector, qzeros, sort_with_sign)
from src.exactla.solve import (equivariant_subspace, in_span, inverse, joint_kernel, kernel, rank,
                               solve_linear, span_basis, tensor_action)


def test_rational_text_forms():
    assert fmt_rational(Fraction(1, 2)) == "1/2"
    assert fmt_rational(Fraction(6, 2)) == "3"
    assert fmt_rational(-4) == "-4"
    assert parse_rational(" -3/6 ") == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_sign_helpers():
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([1, 2, 0]) == 1
    assert koszul_sign([1, 1], [1, 0]) == -1
    assert koszul_sign([1, 0], [1, 0]) == 1
    assert sort_with_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_with_sign((1, 0)) == (-1, (0, 1))
    assert sort_with_sign((1, 1)) == (0, ())


def test_graded_space_rejects_duplicates_and_bad_parity():
    with pytest.raises(ValueError):
        GradedSpace(("a", "a"), (0, 0))
    with pytest.raises(ParityError):
        GradedSpace(("a",), (2,))
    v = GradedSpace(("x", "y", "s"), (0, 0, 1))
    assert v.sdim == (2, 1)
    assert v.sdim_str() == "2|1"


def test_graded_map_block_structure():
    v = GradedSpace(("x", "s"), (0, 1))
    GradedMap.on(v, [[1, 0], [0, 2]])
    GradedMap.on(v, [[0, 1], [1, 0]], parity=1)
    with pytest.raises(ParityError):
        GradedMap.on(v, [[1, 1], [0, 1]])
    with pytest.raises(DimensionMismatchError):
        GradedMap.on(v, [[1]])


def test_kernel_examples():
    assert kernel(qeye(2)) == []
    assert len(kernel(qzeros(3, 3))) == 3
    (vec,) = kernel([[1, 2], [2, 4]])
    assert list(vec) == [Fraction(-2), Fraction(1)]


def test_kernel_rank_nullity():
    m = qarray([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]])
    ker = kernel(m)
    assert rank(m) + len(ker) == 4
    for v in ker:
        assert is_zero(m.dot(v))


def test_solve_and_inverse():
    a = qarray([[2, 1], [1, 1]])
    x = solve_linear(a, [3, 2])
    assert list(x) == [1, 1]
    inv = inverse(a)
    assert is_zero(a.dot(inv) - qeye(2))
    with pytest.raises(NotInSpanError):
        inverse([[1, 2], [2, 4]])
    with pytest.raises(NotInSpanError):
        solve_linear([[1, 2], [2, 4]], [1, 0])


def test_span_helpers():
    basis = span_basis([qvector([1, 1, 0]), qvector([2, 2, 0]), qvector([0, 0, 1])])
    assert len(basis) == 2
    assert in_span(basis, qvector([3, 3, -1]))
    assert not in_span(basis, qvector([1, 0, 0]))


def test_equivariant_subspace_trivial_actions():
    zero = qzeros(2, 2)
    assert len(equivariant_subspace([zero], [zero])) == 4


def test_equivariant_subspace_rotation_commutant():
    j = qarray([[0, -1], [1, 0]])
    basis = equivariant_subspace([j], [j])
    assert len(basis) == 2
    for t in basis:
        assert is_zero(t.dot(j) - j.dot(t))
    assert in_span([b.flatten() for b in basis], qeye(2).flatten())
    assert in_span([b.flatten() for b in basis], j.flatten())


def test_equivariant_subspace_sl2_has_no_invariants():
    h = qarray([[1, 0], [0, -1]])
    e = qarray([[0, 1], [0, 0]])
    f = qarray([[0, 0], [1, 0]])
    trivial = [qzeros(1, 1)] * 3
    assert equivariant_subspace([h, e, f], trivial) == []


def test_equivariant_subspace_stable_under_recombination():
    j = qarray([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    k = qarray([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    first = equivariant_subspace([j, k], [j, k])
    mixed = [j * 2 + k * Fraction(1, 3), j - k * 5]
    second = equivariant_subspace(mixed, mixed)
    flat1 = [t.flatten() for t in first]
    flat2 = [t.flatten() for t in second]
    assert len(flat1) == len(flat2)
    assert all(in_span(flat1, v) for v in flat2)


def test_equivariant_subspace_checks_dimensions():
    with pytest.raises(DimensionMismatchError):
        equivariant_subspace([qzeros(2, 2)], [qzeros(2, 2), qzeros(2, 2)])
    with pytest.raises(DimensionMismatchError):
        equivariant_subspace([qzeros(2, 2)], [qzeros(3, 3)], 2, 2)


def test_tensor_action_single_factor_and_leibniz():
    v = GradedSpace.even(["a", "b"])
    a = qarray([[1, 2], [3, 4]])
    (single,) = tensor_action([v], [[a]], [False])
    assert is_zero(single.matrix - a)
    (double,) = tensor_action([v, v], [[a, a]], [False, False])
    expected = qarray(np.kron(np.array([[1, 2], [3, 4]]), np.eye(2, dtype=int))
                      + np.kron(np.eye(2, dtype=int), np.array([[1, 2], [3, 4]])))
    assert is_zero(double.matrix - expected)


def test_dual_action_preserves_pairing():
    v = GradedSpace.even(["a", "b", "c"])
    a = qarray([[1, 2, 0], [0, -1, 5], [7, 0, 3]])
    (act,) = tensor_action([v, v], [[a, a]], [False, True])
    identity = qvector([1 if i == j else 0 for i in range(3) for j in range(3)])
    assert is_zero(act.matrix.dot(identity))


def test_odd_generator_sign_on_second_factor():
    v = GradedSpace(("x", "s"), (0, 1))
    odd = qarray([[0, 1], [1, 0]])
    zero = qzeros(2, 2)
    (act,) = tensor_action([v, v], [[zero, odd]], [False, False], [1])
    ##acting past an odd first factor picks up a sign: s⊗x ↦ −s⊗s
    src = 1 * 2 + 0
    tgt = 1 * 2 + 1
    assert act.matrix[tgt, src] == -1
    ##no sign past an even first factor: x⊗x ↦ x⊗s
    assert act.matrix[1, 0] == 1


def test_joint_kernel_invariant_metric():
    v = GradedSpace.even(["a", "b"])
    j = qarray([[0, -1], [1, 0]])
    basis = joint_kernel((v, v), [[j, j]], (True, True))
    assert len(basis) == 2
    t = TensorElement((v, v), (True, True), basis[0])
    assert t.parities == {0}


def test_block_diagonal():
    m = block_diagonal([qeye(1), qarray([[1, 2], [3, 4]])])
    assert m.shape == (3, 3)
    assert m[2, 1] == 3 and m[0, 1] == 0
