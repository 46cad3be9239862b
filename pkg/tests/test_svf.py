from fractions import Fraction
import numpy as np
import pytest

from src.catalog.poincare import build_poincare
from src.clifford.signature import Signature
from src.exactla.errors import ShapeError
from src.liesuper.algebra import from_brackets
from src.svf.fields import (SplitDomain, check_left_homomorphism, check_left_right_supercommute,
                            check_right_antihomomorphism, evaluate_field, field_bracket, left_invariant_field,
                            odd_value_vector, right_invariant_field)
from src.svf.hopf import hopf_translation
from src.svf.polynomial import SuperPolynomial


@pytest.fixture(scope="module")
def domain():
    return SplitDomain.from_algebra(build_poincare(Signature(1, 2)).algebra)


def test_split_domain_of_the_poincare_algebra(domain):
    g = domain.algebra
    assert [g.labels[i] for i in domain.v_indices] == ["e0", "e1", "e2"]
    assert [g.labels[i] for i in domain.h_indices] == ["M01", "M02", "M12"]
    assert domain.gamma.shape == (3, 2, 2)
    assert domain.gamma[0, 0, 0] == 1 and domain.gamma[1, 0, 0] == -1 and domain.gamma[2, 0, 1] == 1


def test_translation_chart_rejects_non_central_translations():
    g = from_brackets([("h", 0), ("v", 0), ("s", 1)], {("v", "s"): {"s": 1}})
    with pytest.raises(ShapeError):
        SplitDomain(g, [g.index("h")], [g.index("v")], [g.index("s")])


def test_left_fields_are_a_homomorphism(domain):
    report = check_left_homomorphism(domain)
    assert report.passed, report.first_failure
    assert report.checked > 0


def test_right_fields_are_an_antihomomorphism(domain):
    assert check_right_antihomomorphism(domain).passed


def test_left_and_right_fields_supercommute(domain):
    assert check_left_right_supercommute(domain).passed


def test_odd_left_field_squares_to_a_translation(domain):
    X = left_invariant_field(domain, "s0")
    assert X.parity == 1
    ##[s0, s0] = e0 − e1
    assert field_bracket(X, X) == left_invariant_field(domain, {domain.algebra.index("e0"): 1,
                                                                domain.algebra.index("e1"): -1})


def test_fields_at_the_identity(domain):
    X = left_invariant_field(domain, "s1")
    assert odd_value_vector(X) == {domain.algebra.index("s1"): Fraction(1)}
    even, odd = evaluate_field(right_invariant_field(domain, "e2"))
    assert even == {"∂/∂x^2": 1} and odd == {}


def test_hopf_axioms(domain):
    hopf = hopf_translation(domain)
    report = hopf.check_axioms()
    assert report.passed, report.first_failure


def test_comultiplication_of_the_first_coordinate(domain):
    hopf = hopf_translation(domain)
    x0 = hopf.coordinate("x", 0)
    ring = (6, 4)
    ##second tensor copy: x^3.. for x, s^2.. for s
    expected = SuperPolynomial.x(*ring, 0) + SuperPolynomial.x(*ring, 3) \
        - (SuperPolynomial.s(*ring, 0) * SuperPolynomial.s(*ring, 2)).scaled(Fraction(1, 2)) \
        - (SuperPolynomial.s(*ring, 1) * SuperPolynomial.s(*ring, 3)).scaled(Fraction(1, 2))
    assert hopf.comultiplication(x0) == expected
    assert hopf.antipode(x0) == x0.scaled(-1)
    assert hopf.antipode(hopf.coordinate("s", 1)) == hopf.coordinate("s", 1).scaled(-1)


def test_hopf_translation_validates_gamma():
    with pytest.raises(ValueError):
        hopf_translation(np.zeros((2, 2), dtype=object))
    skew = np.array([[[0, 1], [-1, 0]]], dtype=object)
    with pytest.raises(ValueError):
        hopf_translation(skew)


def test_coordinate_directions_commute(domain):
    g = domain.algebra
    m01, s0 = g.index("M01"), g.index("s0")
    assert domain.formal_bracket(("x", 0), ("x", 1)) == {}
    assert domain.formal_bracket(("s", 0), ("s", 1)) == {}
    assert domain.formal_bracket(("x", m01), ("x", s0)) == {}
    assert domain.formal_bracket(("L", m01), ("R", s0)) == {}
    assert domain.formal_bracket(("R", m01), ("R", s0)) == {
        ("R", k): -c for k, c in g.structure(m01, s0).items()}
