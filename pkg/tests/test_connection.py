from random import Random
import pytest

from src.catalog.poincare import build_poincare
from src.clifford.signature import Signature
from src.connection.curvature import (connection_report, curvature_at_o, infinitesimal_holonomy, is_flat,
                                      parallel_tensor_space, random_change_of_basis, rebase_decomposition,
                                      rebase_nomizu, torsion_at_o)
from src.connection.nomizu import (NomizuMap, canonical_nomizu, check_metric, check_metric_parallel,
                                   check_nomizu_equivariance, invariant_metric, levi_civita_nomizu,
                                   natural_torsion_free, nomizu_membership, nomizu_space, supersymmetry_nomizu)
from src.connection.table import (DEFAULT_ALTERNATES, DEFAULT_REPRESENTATIVES, EXPECTED_D, TSV_HEADER,
                                  poincare_connection_table, render_tsv, table_row)
from src.exactla.errors import DegenerateFormError, ParityError
from src.exactla.rational import qeye, qzeros
from src.liesuper.algebra import from_brackets, general_linear
from src.liesuper.decomposition import ReductiveDecomposition


def sphere():
    so3 = from_brackets([("L1", 0), ("L2", 0), ("L3", 0)],
                        {("L1", "L2"): {"L3": 1}, ("L2", "L3"): {"L1": 1}, ("L3", "L1"): {"L2": 1}})
    return ReductiveDecomposition.from_labels(so3, ["L3"], ["L1", "L2"])


@pytest.fixture(scope="module")
def poincare():
    return build_poincare(Signature(1, 2)).decomposition


def test_sphere_has_no_equivariant_nomizu_maps():
    space = nomizu_space(sphere())
    assert space.dim == 0
    assert space.blocks["V->V*xV"] == 0


def test_canonical_connection_of_the_sphere_is_curved():
    d = sphere()
    n = canonical_nomizu(d)
    report = is_flat(n)
    assert not report.passed
    assert report.details["criteria_agree"] is True
    ##symmetric pair: no torsion
    assert torsion_at_o(n) == {}
    assert infinitesimal_holonomy(n).dim == 1


def test_levi_civita_of_the_sphere_is_canonical():
    d = sphere()
    G = invariant_metric(d)
    assert G is not None
    assert check_metric(d, G).passed
    lc = levi_civita_nomizu(d, G)
    assert lc == NomizuMap.zero(d)
    assert check_metric_parallel(lc, G).passed


def test_degenerate_metric_rejected():
    d = sphere()
    with pytest.raises(DegenerateFormError):
        levi_civita_nomizu(d, qzeros(2, 2))


def test_nomizu_map_parity_is_enforced(poincare):
    n = len(poincare.m_indices)
    ops = [qzeros(n, n) for _ in range(n)]
    ##L(e0) sending s0 to e0 is odd
    ops[0][0, 3] = 1
    with pytest.raises(ParityError):
        NomizuMap(poincare, ops)


def test_canonical_connection_on_poincare_is_flat(poincare):
    n = canonical_nomizu(poincare)
    report = is_flat(n)
    assert report.passed
    assert report.details["criteria_agree"] is True
    assert curvature_at_o(n) == {}
    assert infinitesimal_holonomy(n).dim == 0


def test_natural_connection_is_torsion_free_and_equivariant(poincare):
    n = natural_torsion_free(poincare)
    assert torsion_at_o(n) == {}
    assert check_nomizu_equivariance(n).passed
    assert nomizu_membership(nomizu_space(poincare), n)


def test_canonical_torsion_is_minus_the_bracket(poincare):
    torsion = torsion_at_o(canonical_nomizu(poincare))
    g = poincare.algebra
    labels = poincare.m_space.labels
    s0, e0, e1 = labels.index("s0"), labels.index("e0"), labels.index("e1")
    ##T(s0,s0) = −[s0,s0] = −e0 + e1
    assert torsion[(s0, s0)] == {e0: -1, e1: 1}
    assert g.structure(g.index("s0"), g.index("s0")) == {g.index("e0"): 1, g.index("e1"): -1}


def test_supersymmetry_connection_vanishes_without_odd_action(poincare):
    assert supersymmetry_nomizu(poincare).is_zero()


def test_connection_report_serializes(poincare):
    rep = connection_report(natural_torsion_free(poincare))
    data = rep.to_dict()
    assert data["connection"] == "natural-torsion-free"
    assert data["torsion"] == {}
    assert data["flat"]["check"] == "flat"
    assert "holonomy" in data


def test_holonomy_dimension_is_basis_independent():
    d = sphere()
    n = canonical_nomizu(d)
    rng = Random(11)
    for _ in range(3):
        P = random_change_of_basis(d, rng)
        target = rebase_decomposition(d, P)
        moved = rebase_nomizu(n, P, target)
        assert check_nomizu_equivariance(moved).passed
        assert infinitesimal_holonomy(moved).dim == infinitesimal_holonomy(n).dim


def test_identity_rebase_keeps_the_algebra():
    d = sphere()
    target = rebase_decomposition(d, qeye(2))
    assert target.algebra.labels == ("L1'", "L2'", "L3")
    assert target.algebra.structure(0, 1) == d.algebra.structure(0, 1)


def test_parallel_tensors_of_the_flat_poincare_connection(poincare):
    n = canonical_nomizu(poincare)
    ##empty holonomy: every tensor is parallel
    assert len(parallel_tensor_space(n, 1, 0)) == 5


def test_parallel_metric_of_the_sphere():
    n = canonical_nomizu(sphere())
    tensors = parallel_tensor_space(n, 0, 2)
    assert len(tensors) == 2


def test_gl_odd_part_nomizu_space_is_finite():
    g = general_linear(1, 1)
    d = ReductiveDecomposition(g, tuple(g.even_indices()), tuple(g.odd_indices()))
    space = nomizu_space(d)
    assert all(check_nomizu_equivariance(b).passed for b in space.basis)


@pytest.mark.parametrize("cls", sorted(DEFAULT_REPRESENTATIVES))
def test_table_rows(cls):
    row = table_row(Signature(*DEFAULT_REPRESENTATIVES[cls]))
    assert row.table_class == cls
    assert row.D == EXPECTED_D[cls]
    assert sum(row.blocks.values()) == row.D
    assert not row.flagged


@pytest.mark.parametrize("cls", sorted(DEFAULT_ALTERNATES))
def test_table_is_signature_independent(cls):
    assert table_row(Signature(*DEFAULT_ALTERNATES[cls])).D == EXPECTED_D[cls]


def test_three_dimensional_row_is_flagged():
    row = table_row(Signature(2, 1))
    assert row.table_class == 1
    assert row.D == 13
    assert row.blocks["V->V*xV"] == 1
    assert row.flagged


def test_table_rendering_and_validation():
    rows = poincare_connection_table({6: (1, 3), 8: (2, 2)})
    assert [r.table_class for r in rows] == [6, 8]
    text = render_tsv(rows)
    lines = text.splitlines()
    assert lines[0] == TSV_HEADER
    assert lines[1].split("\t")[:3] == ["6", "1,3", "6"]
    with pytest.raises(ValueError):
        poincare_connection_table({1: (1, 3)})
