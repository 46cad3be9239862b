import numpy as np
import pytest

from src.clifford.forms import (form_equivariance, gamma_transfer, invariant_bilinear_forms, schur_algebra)
from src.clifford.gamma import (build_gamma, certify_irreducible, check_clifford_relation,
                                clifford_of_multivector, volume_element)
from src.clifford.signature import Signature, schur_dim_expected, spin_dim_expected
from src.clifford.spin import (check_xi_star, spin_algebra, spin_lie_algebra, wedge, xi_star, xi_star_inv)
from src.exactla.errors import NotInSpanError
from src.exactla.rational import HALF, is_zero, qeye, qzeros
from src.liesuper.algebra import check_super_jacobi


@pytest.mark.parametrize("r,s,dim", [(1, 2, 2), (1, 0, 2), (0, 1, 1), (2, 1, 4), (1, 3, 4), (0, 2, 2),
                                     (3, 2, 8), (4, 0, 8), (2, 3, 4), (1, 10, 32)])
def test_spin_module_dimensions(r, s, dim):
    rep = build_gamma(Signature(r, s))
    assert rep.spin_dim == dim == spin_dim_expected(Signature(r, s))
    assert all(set(np.unique(g.astype(int))) <= {-1, 0, 1} for g in rep.gammas)


@pytest.mark.parametrize("r,s", [(1, 2), (2, 1), (3, 1), (0, 4), (5, 0), (1, 4), (2, 2), (0, 7), (1, 10)])
def test_clifford_relation(r, s):
    assert check_clifford_relation(build_gamma(Signature(r, s))).passed


def test_single_generator_squares():
    (g,) = build_gamma(Signature(0, 1)).gammas
    assert is_zero(g.dot(g) - qeye(1))
    (g,) = build_gamma(Signature(1, 0)).gammas
    assert is_zero(g.dot(g) + qeye(2))


@pytest.mark.parametrize("r,s", [(1, 2), (2, 1), (1, 3), (0, 2), (0, 3), (3, 0)])
def test_irreducibility_certificate(r, s):
    report = certify_irreducible(build_gamma(Signature(r, s)))
    assert report.passed, report.details


def test_build_gamma_needs_generators():
    with pytest.raises(ValueError):
        build_gamma(Signature(0, 0))


def test_xi_star_on_generators():
    rep = build_gamma(Signature(1, 2))
    sp = spin_algebra(rep)
    elem = rep.gammas[0].dot(rep.gammas[1]) * HALF
    assert is_zero(xi_star(sp, elem) - wedge(rep, 0, 1))
    assert is_zero(xi_star(sp, qzeros(2, 2)))
    assert is_zero(xi_star_inv(sp, wedge(rep, 1, 2)) - rep.gammas[1].dot(rep.gammas[2]) * HALF)


@pytest.mark.parametrize("r,s", [(1, 2), (2, 1), (1, 3)])
def test_xi_star_preserves_brackets(r, s):
    sp = spin_algebra(build_gamma(Signature(r, s)))
    assert check_xi_star(sp).passed
    assert check_super_jacobi(spin_lie_algebra(sp)).passed


def test_xi_star_rejects_non_spin_elements():
    rep = build_gamma(Signature(1, 2))
    with pytest.raises(NotInSpanError):
        xi_star(spin_algebra(rep), qeye(rep.spin_dim))
    ##a single generator is odd in Cl(1,3) and misses the bivectors
    rep = build_gamma(Signature(1, 3))
    with pytest.raises(NotInSpanError):
        xi_star(spin_algebra(rep), rep.gammas[0])


@pytest.mark.parametrize("r,s,dim", [(1, 2, 1), (0, 2, 2), (2, 1, 4)])
def test_schur_algebra_dimensions(r, s, dim):
    assert len(schur_algebra(build_gamma(Signature(r, s)))) == dim


def test_schur_dimension_depends_on_residue_only():
    for first, second in [((2, 1), (3, 2)), ((0, 2), (1, 3))]:
        a, b = Signature(*first), Signature(*second)
        assert a.residue == b.residue
        da = len(schur_algebra(build_gamma(a)))
        db = len(schur_algebra(build_gamma(b)))
        assert da == db == schur_dim_expected(a)


def test_poincare_gamma_exists_in_signature_1_2():
    rep = build_gamma(Signature(1, 2))
    forms = invariant_bilinear_forms(rep, "vector", "symmetric")
    assert len(forms) == 1
    assert form_equivariance(forms[0], rep, 1).passed


def test_scalar_forms_in_signature_1_3():
    rep = build_gamma(Signature(1, 3))
    forms = invariant_bilinear_forms(rep, "scalar", "any")
    assert len(forms) == 2
    for f in forms:
        assert form_equivariance(f, rep, 0).passed
    assert len(invariant_bilinear_forms(rep, "scalar", "skew")) == 2
    assert invariant_bilinear_forms(rep, "scalar", "both") == []


@pytest.mark.parametrize("r,s", [(1, 2), (2, 1), (1, 3)])
def test_vector_form_methods_agree(r, s):
    rep = build_gamma(Signature(r, s))
    direct = invariant_bilinear_forms(rep, "vector", "any", method="direct")
    schur = invariant_bilinear_forms(rep, "vector", "any", method="schur")
    assert len(direct) == len(schur)
    for f in schur:
        assert form_equivariance(f, rep, 1).passed


def test_gamma_transfer():
    rep = build_gamma(Signature(1, 3))
    beta, other = invariant_bilinear_forms(rep, "scalar", "skew")
    zero = gamma_transfer(beta, 0, rep)
    assert is_zero(zero.coefficients - beta.coefficients)
    one = gamma_transfer(beta, 1, rep)
    assert form_equivariance(one, rep, 1).passed
    two = gamma_transfer(beta, 2, rep)
    assert form_equivariance(two, rep, 2).passed
    total = gamma_transfer(beta + other, 1, rep)
    assert is_zero(total.coefficients - one.coefficients - gamma_transfer(other, 1, rep).coefficients)


def test_multivector_action():
    rep = build_gamma(Signature(1, 3))
    assert is_zero(clifford_of_multivector(rep, {(1, 0): 1}) + rep.gammas[0].dot(rep.gammas[1]))
    assert is_zero(clifford_of_multivector(rep, {(0, 1, 2, 3): 1}) - volume_element(rep))
    assert is_zero(clifford_of_multivector(rep, {(0, 0): 1}))
