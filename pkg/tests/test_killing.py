from fractions import Fraction
import pytest

from src.catalog.poincare import build_poincare
from src.clifford.gamma import build_gamma
from src.clifford.signature import Signature
from src.exactla.errors import CatalogError, DimensionMismatchError, ParityError, ShapeError
from src.exactla.graded import GradedSpace
from src.exactla.rational import is_zero, qeye
from src.killing.adapted import (AdaptedSupersymmetryAlgebra, adapted_to_dict, check_adapted, dirac_bracket,
                                 killing_spinor_jets, killing_spinor_space, killing_superalgebra_check,
                                 kosmann_bracket, spinor_connection_curvature, supersymmetry_cross_check,
                                 transported_algebra)
from src.killing.flux import (ALL_CONVENTIONS, SUPERGRAVITY, Conventions, FluxForm, calibrate_flux,
                              inequivalent_conventions, supergravity_connection_term)
from src.liesuper.decomposition import ReductiveDecomposition


@pytest.fixture(scope="module")
def adapted():
    return build_poincare(Signature(1, 2)).adapted


def one(g, label):
    return {g.index(label): Fraction(1)}


def test_poincare_is_adapted(adapted):
    report = check_adapted(adapted)
    assert report.passed, report.first_failure
    assert report.details["lift"]["passed"]
    assert report.details["gamma-symmetric"]["passed"]


def test_doubled_lift_is_caught(adapted):
    wrong = AdaptedSupersymmetryAlgebra(adapted.decomposition, adapted.rep, adapted.frame,
                                        adapted.spinor_indices, lift=[m * 2 for m in adapted.lift])
    report = check_adapted(wrong, jacobi=False)
    assert not report.passed
    assert not report.details["lift"]["passed"]
    assert not report.details["xi-star"]["passed"]


def test_frame_shape_is_checked(adapted):
    with pytest.raises(ShapeError):
        AdaptedSupersymmetryAlgebra(adapted.decomposition, adapted.rep, qeye(2), adapted.spinor_indices)


def test_spinor_count_is_checked(adapted):
    with pytest.raises(ShapeError):
        AdaptedSupersymmetryAlgebra(adapted.decomposition, build_gamma(Signature(1, 3)), qeye(4),
                                    adapted.spinor_indices)


def test_kosmann_and_dirac_brackets(adapted):
    g = adapted.algebra
    ##[M01, s0] = −½ s0
    assert kosmann_bracket(adapted, one(g, "M01"), one(g, "s0")) == {g.index("s0"): Fraction(1, 2)}
    assert kosmann_bracket(adapted, one(g, "e1"), one(g, "s1")) == {}
    assert dirac_bracket(adapted, one(g, "s0"), one(g, "s0")) == {g.index("e0"): -1, g.index("e1"): 1}
    assert dirac_bracket(adapted, one(g, "s0"), one(g, "s1")) == {g.index("e2"): -1}


def test_bracket_parities_are_checked(adapted):
    g = adapted.algebra
    with pytest.raises(ParityError):
        kosmann_bracket(adapted, one(g, "s0"), one(g, "s1"))
    with pytest.raises(ParityError):
        dirac_bracket(adapted, one(g, "e0"), one(g, "s1"))


def test_transported_table_is_negated(adapted):
    g = adapted.algebra
    t = transported_algebra(adapted)
    assert t.structure(g.index("M01"), g.index("M02")) == {g.index("M12"): -1}
    report = killing_superalgebra_check(adapted)
    assert report.passed, report.first_failure
    assert report.details["transported-jacobi"]["passed"]


def perturbed(adapted, i, j, k):
    d = adapted.decomposition
    g = d.algebra.with_perturbation(i, j, k)
    return AdaptedSupersymmetryAlgebra(ReductiveDecomposition(g, d.h_indices, d.m_indices), adapted.rep,
                                       adapted.frame, adapted.spinor_indices, lift=adapted.lift)


def test_killing_check_sees_a_changed_bracket(adapted):
    g = adapted.algebra
    for i, j, k in (("s0", "s1", "M01"), ("M01", "s0", "s1")):
        report = killing_superalgebra_check(perturbed(adapted, g.index(i), g.index(j), g.index(k)))
        assert not report.passed
        assert not report.details["negated-table"]["passed"]


def test_spinor_connection_is_flat(adapted):
    report = spinor_connection_curvature(adapted)
    assert report.passed
    assert report.details["nonzero_entries"] == {}
    assert supersymmetry_cross_check(adapted).passed


def test_killing_spinors_of_flat_space(adapted):
    assert len(killing_spinor_space(adapted)) == 2


def test_killing_spinor_jets(adapted):
    g = adapted.algebra
    jets = killing_spinor_jets(adapted, g.index("s0"), order=2, directions=[g.index("M01")])
    assert jets["M01"] == [{"s0": "1"}, {"s0": "1/2"}, {"s0": "1/8"}]
    translations = killing_spinor_jets(adapted, g.index("s1"), order=1)
    assert translations["e0"] == [{"s1": "1"}, {}]
    with pytest.raises(ParityError):
        killing_spinor_jets(adapted, g.index("e0"))


def test_adapted_serialization(adapted):
    data = adapted_to_dict(adapted)
    assert data["signature"] == [1, 2]
    assert data["m0"] == ["e0", "e1", "e2"]
    assert data["spinors"] == ["s0", "s1"]
    assert data["frame"][0] == ["1", "0", "0"]


def test_flux_components_are_alternating():
    space = GradedSpace.even(["a", "b", "c", "d", "e"])
    flux = FluxForm(space, {(1, 0, 2, 3): 2, (0, 0, 1, 2): 5})
    assert flux.components == {(0, 1, 2, 3): Fraction(-2)}
    assert flux.value((1, 0, 2, 3)) == 2
    assert flux.value((0, 1, 2, 4)) == 0
    with pytest.raises(DimensionMismatchError):
        FluxForm(space, {(0, 1, 2): 1})


def test_supergravity_term_needs_eleven_dimensions():
    space = GradedSpace.even(["e0", "e1", "e2"])
    with pytest.raises(ShapeError):
        supergravity_connection_term(build_gamma(Signature(1, 2)), FluxForm(space, {}), [1, 0, 0])


def test_supergravity_term_for_a_product_flux():
    rep = build_gamma(SUPERGRAVITY)
    space = GradedSpace.even([f"e{i}" for i in range(11)])
    flux = FluxForm(space, {(0, 1, 2, 3): 3})
    I = rep.product([0, 1, 2, 3])

    def unit(k):
        return [1 if j == k else 0 for j in range(11)]

    assert is_zero(supergravity_connection_term(rep, flux, unit(0)) - I.dot(rep.gammas[0]) * Fraction(-1, 2))
    assert is_zero(supergravity_connection_term(rep, flux, unit(6)) - I.dot(rep.gammas[6]) * Fraction(1, 4))
    assert is_zero(supergravity_connection_term(rep, FluxForm(space, {}), unit(0)))


def test_calibration_without_flux(adapted):
    report = calibrate_flux(adapted, None)
    assert report.passed
    classes = inequivalent_conventions()
    assert len(classes) == 4 and all(len(members) == 2 for members in classes)
    assert len(report.details["chosen"]) == len(classes)
    assert all(len(row["equivalent"]) == 1 and row["closes"] for row in report.details["conventions"])
    assert report.details["selected"]["conventions"] == ALL_CONVENTIONS[0].to_dict()


def test_musical_sign_flips_only_the_contraction():
    rep = build_gamma(SUPERGRAVITY)
    space = GradedSpace.even([f"e{i}" for i in range(11)])
    flux = FluxForm(space, {(0, 1, 2, 3): 3})
    I = rep.product([0, 1, 2, 3])
    flipped = Conventions(musical=-1)
    e0 = [1] + [0] * 10
    e6 = [0] * 6 + [1] + [0] * 4
    assert is_zero(supergravity_connection_term(rep, flux, e0, flipped) - I.dot(rep.gammas[0]) * Fraction(1, 2))
    assert is_zero(supergravity_connection_term(rep, flux, e6, flipped) - I.dot(rep.gammas[6]) * Fraction(1, 4))
    same = Conventions(clifford=-1, musical=-1)
    assert same.effective == Conventions().effective
    assert is_zero(supergravity_connection_term(rep, flux, e0, same) - supergravity_connection_term(rep, flux, e0))


def test_calibration_rejects_an_algebra_that_does_not_close(adapted):
    g = adapted.algebra
    ##[s0,[s0,s0]] no longer vanishes
    wrong = perturbed(adapted, g.index("s0"), g.index("s0"), g.index("M01"))
    report = calibrate_flux(wrong, None)
    assert not report.passed
    assert report.details["chosen"] == []
    assert report.first_failure["minimal"]["residual_entries"] == 0
    assert not report.first_failure["minimal"]["closes"]


def test_calibration_records_candidates_that_fail_to_build(adapted):
    def assemble(conv, form):
        if conv.flux < 0:
            raise CatalogError("no isotropy part")
        return adapted

    report = calibrate_flux(None, None, assemble=assemble, forms=[0])
    assert report.passed
    assert len(report.details["chosen"]) == 2
    assert sum(1 for row in report.details["conventions"] if "error" in row) == 2
