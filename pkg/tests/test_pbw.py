from fractions import Fraction
from random import Random
import pytest
import sympy

from src.exactla.errors import ParityError
from src.liesuper.algebra import from_brackets, general_linear, sparse_add, sparse_scale
from src.pbw.enveloping import PBWAlgebra, antipode, check_confluence, random_words
from src.pbw.exterior import ExteriorElement, all_wedges, wedge_coproduct
from src.pbw.koszul import (coderivation_left, coderivation_right, formal_field, nested_ad_sum,
                            verify_koszul_identities)
from src.pbw.phi import SymmetricAlgebra, phi_c, phi_c_correspondence
from src.pbw.series import ALPHA, EPSILON, THETA, BernoulliSeries, bernoulli, series_coefficient
from src.pbw.symmetrize import gamma_symmetrize, underline_gamma, underline_gamma_inv


def supertranslations():
    ##odd part of the (1,2) Poincaré superalgebra with its central translations
    return from_brackets([("e0", 0), ("e1", 0), ("e2", 0), ("s0", 1), ("s1", 1)],
                         {("s0", "s0"): {"e0": 1, "e1": -1}, ("s1", "s1"): {"e0": 1, "e1": 1},
                          ("s0", "s1"): {"e2": 1}})


def gl21():
    return general_linear(2, 1)


def test_bernoulli_matches_sympy_on_even_indices():
    for n in range(0, 21, 2):
        ref = sympy.bernoulli(n)
        assert bernoulli(n) == Fraction(int(ref.p), int(ref.q))
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(4) == Fraction(-1, 30)


def test_series_coefficients():
    assert THETA.coefficient(1) == Fraction(1, 2)
    assert ALPHA.coefficient(2) == Fraction(1, 3)
    assert EPSILON.coefficient(2) == Fraction(-1, 6)
    assert THETA.coefficient(3) == Fraction(-1, 24)
    assert ALPHA.coefficient(4) == Fraction(-1, 45)
    assert EPSILON.coefficient(4) == Fraction(7, 360)
    assert EPSILON.coefficient(0) == 1 and ALPHA.coefficient(0) == 1 and THETA.coefficient(0) == 0
    assert all(THETA.coefficient(n) == 0 for n in (0, 2, 4, 6))
    assert all(ALPHA.coefficient(n) == 0 and EPSILON.coefficient(n) == 0 for n in (1, 3, 5))
    assert series_coefficient("f", 1, 0) == -1
    assert series_coefficient("f", 0, -1) == -1
    with pytest.raises(ValueError):
        BernoulliSeries("beta")


def test_normal_order_rules():
    g = supertranslations()
    alg = PBWAlgebra(g)
    assert alg.normal_order(["e0", "s0"]).to_dict() == {"e0 s0": "1"}
    assert alg.normal_order(["s0", "s0"]).to_dict() == {"e0": "1/2", "e1": "-1/2"}
    assert alg.normal_order(["s1", "s0"]).to_dict() == {"e2": "1", "s0 s1": "-1"}
    assert str(alg.normal_order(["s0", "e1", "e0"])) == "1 e0 e1 s0"
    with pytest.raises(KeyError):
        alg.normal_order(["q"])


def test_normal_order_is_idempotent_and_confluent():
    g = gl21()
    alg = PBWAlgebra(g)
    rng = Random(7)
    words = random_words(alg, 100, 4, rng)
    for w in words[:20]:
        u = alg.normal_order(w)
        assert alg.from_terms(u.terms) == u
        assert u.degree <= len(w)
    report = check_confluence(alg, words, rng)
    assert report["passed"] and report["checked"] == 100


def test_gamma_symmetrize_small_cases():
    g = supertranslations()
    alg = PBWAlgebra(g)
    s0, s1 = g.index("s0"), g.index("s1")
    assert gamma_symmetrize(alg, ExteriorElement.basis(())) == alg.one()
    assert gamma_symmetrize(alg, ExteriorElement.basis((s0,))) == alg.generator(s0)
    expected = alg.normal_order([s0, s1]) - alg.generator("e2").scaled(Fraction(1, 2))
    assert gamma_symmetrize(alg, ExteriorElement.basis((s0, s1))) == expected


def test_underline_gamma_inverse():
    g = supertranslations()
    alg = PBWAlgebra(g)
    s0, s1, e2 = g.index("s0"), g.index("s1"), g.index("e2")
    pres = underline_gamma_inv(alg.normal_order([s0, s1]))
    assert pres == {((e2,), ()): Fraction(1, 2), ((), (s0, s1)): Fraction(1)}
    assert underline_gamma_inv(alg.normal_order(["e0", "e1"])) == {((0, 1), ()): Fraction(1)}


def test_underline_gamma_round_trip_on_basis_pairs():
    g = gl21()
    alg = PBWAlgebra(g)
    even = g.even_indices()
    for w in all_wedges(g.odd_indices(), 4):
        assert underline_gamma_inv(gamma_symmetrize(alg, ExteriorElement.basis(w))) == {((), w): Fraction(1)}
        for e in even[:3]:
            pres = {((e,), w): Fraction(2)}
            assert underline_gamma_inv(underline_gamma(alg, pres)) == pres


def test_antipode():
    g = gl21()
    alg = PBWAlgebra(g)
    assert antipode(alg.one()) == alg.one()
    assert antipode(alg.generator(3)) == -alg.generator(3)
    for w in random_words(alg, 30, 4, Random(3)):
        u = alg.normal_order(w)
        assert antipode(antipode(u)) == u
    for w in all_wedges(g.odd_indices(), 4):
        gv = gamma_symmetrize(alg, ExteriorElement.basis(w))
        assert antipode(gv) == gv.scaled((-1) ** len(w))


def test_gamma_commutes_with_even_derivations():
    g = gl21()
    alg = PBWAlgebra(g)
    x = g.index("E12")
    xu = alg.generator(x)
    for w in all_wedges(g.odd_indices(), 3):
        ##derivation extension of ad(x) to the wedge
        dv = ExteriorElement()
        for pos, b in enumerate(w):
            for k, c in g.structure(x, b).items():
                dv = dv + ExteriorElement({w[:pos] + (k,) + w[pos + 1:]: c})
        gv = gamma_symmetrize(alg, ExteriorElement.basis(w))
        assert gamma_symmetrize(alg, dv) == xu * gv - gv * xu


def test_wedge_coproduct_signs():
    terms = wedge_coproduct((3, 4))
    assert (1, (), (3, 4)) in terms and (1, (3,), (4,)) in terms
    assert (-1, (4,), (3,)) in terms and (1, (3, 4), ()) in terms
    assert ExteriorElement.basis((4, 3)) == ExteriorElement.basis((3, 4)).scaled(-1)
    assert ExteriorElement.basis((3, 3)).is_zero()


def test_formal_field_values():
    g = gl21()
    a, a1, a2 = g.index("E13"), g.index("E31"), g.index("E23")
    theta = formal_field(g, a, THETA)
    eps = formal_field(g, a, EPSILON)
    alpha = formal_field(g, a, ALPHA)
    assert theta.value((a1,)) == sparse_scale(g.structure(a1, a), Fraction(1, 2))
    assert eps.value(()) == {a: 1}
    nested = sparse_add(g.bracket_sparse({a1: 1}, g.structure(a2, a)),
                        g.bracket_sparse({a2: 1}, g.structure(a1, a)), -1)
    w, sign = (min(a1, a2), max(a1, a2)), (1 if a1 < a2 else -1)
    assert eps.value(w) == sparse_scale(nested, Fraction(-1, 6) * sign)
    assert theta.support_degrees() and all(d % 2 == 1 for d in theta.support_degrees())
    assert all(d % 2 == 0 for d in eps.support_degrees() + alpha.support_degrees())
    assert all(g.parity_of(v) == 0 for v in theta.table.values())
    with pytest.raises(ParityError):
        formal_field(g, "E12", THETA)


def test_nested_ad_sum_of_single_letter():
    g = supertranslations()
    assert nested_ad_sum(g, (3,), {3: 1}) == {0: 1, 1: -1}


def test_worked_example_left_multiplication():
    g = gl21()
    alg = PBWAlgebra(g)
    a, a1, a2 = g.index("E13"), g.index("E31"), g.index("E23")
    A, A1, A2 = alg.generator(a), alg.generator(a1), alg.generator(a2)
    lhs = A * gamma_symmetrize(alg, ExteriorElement({(a1, a2): 1}))
    bracket = lambda x, y: alg.from_vector(g.bracket_sparse({x: 1}, y))
    rhs = (bracket(a1, g.structure(a2, a)).scaled(Fraction(-1, 6))
           + bracket(a2, g.structure(a1, a)).scaled(Fraction(1, 6))
           + gamma_symmetrize(alg, ExteriorElement({(a, a1, a2): 1}))
           + (alg.from_vector(g.structure(a1, a)) * A2).scaled(Fraction(1, 2))
           - (alg.from_vector(g.structure(a2, a)) * A1).scaled(Fraction(1, 2)))
    assert lhs == rhs
    assert underline_gamma(alg, coderivation_left(g, a, (a1, a2))) == lhs


def test_coderivations_on_low_degrees():
    g = supertranslations()
    alg = PBWAlgebra(g)
    s0, s1 = g.index("s0"), g.index("s1")
    assert coderivation_left(g, s0, ()) == {((), (s0,)): 1}
    ##only the degree-one θ term survives when [g_1, g_1] is central
    right = coderivation_right(alg, s0, {((), (s1,)): Fraction(1)})
    assert right == {((), (s0, s1)): 1, ((g.index("e2"),), ()): Fraction(-1, 2)}
    assert underline_gamma(alg, right) == (alg.generator(s1) * alg.generator(s0)).scaled(-1)


def test_koszul_identities_hold():
    report = verify_koszul_identities(supertranslations())
    assert report.passed and report.checked == 2 * 2 * 4
    abelian = from_brackets([("x", 0), ("s", 1), ("t", 1)], {})
    assert verify_koszul_identities(abelian).passed
    report = verify_koszul_identities(gl21(), max_degree=4)
    assert report.passed, report.first_failure
    assert report.details["wedges"] == 16


def test_koszul_identities_detect_broken_series():
    g = gl21()
    alg = PBWAlgebra(g)
    a, a1 = g.index("E13"), g.index("E31")
    bad_theta = formal_field(g, a, THETA)
    bad_theta.table = {w: sparse_scale(v, 2) for w, v in bad_theta.table.items()}
    pres = coderivation_left(g, a, (a1,), (bad_theta, formal_field(g, a, EPSILON)))
    assert underline_gamma(alg, pres) != alg.generator(a) * alg.generator(a1)


def test_symmetric_algebra_signs():
    g = supertranslations()
    sym = SymmetricAlgebra(PBWAlgebra(g))
    s0, s1, e0 = g.index("s0"), g.index("s1"), g.index("e0")
    assert sym.normalize((s1, s0)) == (-1, (s0, s1))
    assert sym.normalize((s0, s0)) == (0, ())
    assert sym.normalize((s0, e0)) == (1, (e0, s0))
    assert len(sym.coproduct((e0, e0))) == 4
    u = sym.symmetrize({(e0, s0, s1): Fraction(3)})
    assert sym.desymmetrize(u) == {(e0, s0, s1): Fraction(3)}


@pytest.mark.parametrize("c", [0, 1, -1])
def test_phi_c_correspondence_odd_element(c):
    g = supertranslations()
    assert phi_c_correspondence(g, c, "s1").passed


@pytest.mark.parametrize("c,x", [(0, "E12"), (0, "E13"), (1, "E13"), (-1, "E31"), (1, "E21")])
def test_phi_c_correspondence_gl21(c, x):
    report = phi_c_correspondence(gl21(), c, x)
    assert report.passed, report.first_failure
    assert report.checked == 16


def test_phi_one_for_central_element_is_multiplication():
    g = gl21()
    alg = PBWAlgebra(g)
    sym = SymmetricAlgebra(alg)
    identity = {g.index("E11"): Fraction(1), g.index("E22"): Fraction(1), g.index("E33"): Fraction(1)}
    assert phi_c_correspondence(g, 1, identity).passed
    w = tuple(g.odd_indices()[:2])
    out = phi_c(sym, 1, identity, {w: Fraction(1)})
    assert out == sym.multiply({w: Fraction(1)}, {(k,): v for k, v in identity.items()})


def test_phi_c_rejects_bad_input():
    g = supertranslations()
    with pytest.raises(ValueError):
        phi_c_correspondence(g, 2, "s0")
    with pytest.raises(ParityError):
        phi_c_correspondence(g, 0, {0: 1, 3: 1})
