from fractions import Fraction
import json
import pytest

from src.exactla.errors import DecompositionError, ParityError
from src.exactla.graded import GradedSpace
from src.exactla.rational import is_zero, qarray
from src.liesuper.algebra import (LieSuperalgebra, check_super_antisymmetry, check_super_jacobi,
                                  from_brackets, general_linear)
from src.liesuper.decomposition import ReductiveDecomposition, check_reductive
from src.liesuper.forms import SuperBilinearForm, check_equivariance, qtensor, scalar_space
from src.liesuper.invariants import invariants_in_tensor
from src.liesuper.representation import adjoint_rep


def sl2():
    return from_brackets([("h", 0), ("e", 0), ("f", 0)],
                         {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}})


def so3():
    return from_brackets([("L1", 0), ("L2", 0), ("L3", 0)],
                         {("L1", "L2"): {"L3": 1}, ("L2", "L3"): {"L1": 1}, ("L3", "L1"): {"L2": 1}})


def small_super():
    return from_brackets([("h", 0), ("e", 0), ("s", 1)],
                         {("h", "e"): {"e": 2}, ("h", "s"): {"s": 1}, ("s", "s"): {"e": 1}})


def test_bracket_antisymmetry_filled_in():
    g = sl2()
    e, f = g.vec({"e": 1}), g.vec({"f": 1})
    assert list(g.bracket(f, e)) == list(g.vec({"h": -1}))
    assert is_zero(g.bracket(e, e))
    assert check_super_antisymmetry(g).passed


def test_odd_bracket_is_symmetric():
    g = small_super()
    s = g.vec({"s": 1})
    assert list(g.bracket(s, s)) == list(g.vec({"e": 1}))


def test_parity_violation_rejected():
    with pytest.raises(ParityError):
        from_brackets([("x", 0), ("s", 1)], {("x", "s"): {"x": 1}})
    with pytest.raises(ValueError):
        from_brackets([("x", 0)], {("x", "x"): {"x": 1}})


def test_jacobi_passes_on_standard_algebras():
    abelian = LieSuperalgebra(GradedSpace(("a", "s"), (0, 1)), {})
    assert check_super_jacobi(abelian).passed
    assert check_super_jacobi(sl2()).passed
    assert check_super_jacobi(small_super()).passed
    gl = general_linear(2, 1)
    assert gl.space.sdim == (5, 4)
    assert check_super_jacobi(gl).passed


def test_jacobi_reports_perturbation():
    g = sl2()
    bad = g.with_perturbation(g.index("h"), g.index("e"), g.index("e"), 1)
    report = check_super_jacobi(bad)
    assert not report.passed
    assert report.failures > 0
    assert len(report.first_failure["triple"]) == 3


def test_adjoint_rep():
    rep = adjoint_rep(sl2())
    assert rep.check().passed
    zero = adjoint_rep(LieSuperalgebra(GradedSpace.even(["a", "b"]), {}))
    assert all(is_zero(m.matrix) for m in zero.matrices)
    super_rep = adjoint_rep(general_linear(1, 1))
    assert super_rep.check().passed


def test_adjoint_rep_requires_jacobi():
    g = sl2()
    bad = g.with_perturbation(g.index("h"), g.index("e"), g.index("e"), 1)
    with pytest.raises(ValueError):
        adjoint_rep(bad)


def test_reductive_checks():
    g = small_super()
    d = ReductiveDecomposition.from_labels(g, ["h"], ["e", "s"])
    report = check_reductive(d)
    assert report.passed
    assert report.details["symmetric"] is False
    sphere = ReductiveDecomposition.from_labels(so3(), ["L3"], ["L1", "L2"])
    assert check_reductive(sphere).details["symmetric"] is True
    whole = ReductiveDecomposition.from_labels(sl2(), ["h", "e", "f"], [])
    assert check_reductive(whole).passed
    assert check_reductive(whole).details["degenerate"] is True
    not_reductive = ReductiveDecomposition.from_labels(sl2(), ["e"], ["h", "f"])
    assert not check_reductive(not_reductive).passed


def test_decomposition_must_partition():
    g = sl2()
    with pytest.raises(DecompositionError):
        ReductiveDecomposition.from_labels(g, ["h", "e"], ["e", "f"])
    with pytest.raises(DecompositionError):
        ReductiveDecomposition.from_labels(g, ["h"], ["e"])


def test_invariant_tensors_on_the_sphere_model():
    d = ReductiveDecomposition.from_labels(so3(), ["L3"], ["L1", "L2"])
    assert len(invariants_in_tensor(d, 0, 2)) == 2
    assert len(invariants_in_tensor(d, 1, 1)) == 2
    assert invariants_in_tensor(d, 1, 0) == []


def test_invariant_tensors_with_trivial_isotropy():
    d = ReductiveDecomposition.from_labels(so3(), [], ["L1", "L2", "L3"])
    assert len(invariants_in_tensor(d, 1, 1)) == 9


def test_check_equivariance_of_forms():
    v = GradedSpace.even(["a", "b"])
    j = qarray([[0, -1], [1, 0]])
    zero = SuperBilinearForm(v, v, scalar_space(), qtensor((1, 2, 2)))
    assert check_equivariance(zero, [j], [j], [qarray([[0]])]).passed
    metric = qtensor((1, 2, 2))
    metric[0, 0, 0] = metric[0, 1, 1] = Fraction(1)
    form = SuperBilinearForm(v, v, scalar_space(), metric, "symmetric")
    assert check_equivariance(form, [j], [j], [qarray([[0]])]).passed
    metric[0, 1, 1] = Fraction(2)
    skewed = SuperBilinearForm(v, v, scalar_space(), metric)
    assert not check_equivariance(skewed, [j], [j], [qarray([[0]])]).passed


def test_json_round_trip():
    g = general_linear(1, 1)
    data = json.loads(g.to_json())
    assert data["basis"][0]["parity"] == "even"
    assert LieSuperalgebra.from_dict(data) == g


def test_json_bad_parity():
    data = {"basis": [{"name": "x", "parity": "sideways"}], "brackets": []}
    with pytest.raises(ParityError):
        LieSuperalgebra.from_dict(data)
