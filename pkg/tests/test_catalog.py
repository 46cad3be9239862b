from fractions import Fraction
from pathlib import Path
import copy
import json
import tempfile
import pytest

from src.catalog.entry import check_entry, entry_from_dict, export_entry, import_entry
from src.catalog.freund_rubin import build_freund_rubin
from src.catalog.plane_wave import build_cahen_wallach, plane_wave_spot_checks
from src.catalog.poincare import build_general_linear, build_poincare, gamma_choices, normalized_gamma
from src.catalog.registry import get_entry, list_entries
from src.catalog.wess_zumino import build_wess_zumino, twistor_spinor_data
from src.clifford.signature import Signature
from src.exactla.errors import CatalogError
from src.killing.adapted import spinor_connection_curvature
from src.killing.flux import SUPERGRAVITY, calibrate_flux, check_flux_invariance
from src.liesuper.algebra import check_super_jacobi, general_linear

FIXTURE = Path(__file__).resolve().parents[1] / "data" / "poincare-1-2.json"


@pytest.fixture(scope="module")
def plane_wave():
    return build_cahen_wallach()


@pytest.fixture(scope="module")
def freund_rubin():
    return build_freund_rubin("4-7")


def test_registry_names():
    names = list_entries()
    for name in ("poincare-1-2", "cahen-wallach", "freund-rubin-4-7", "freund-rubin-7-4", "wess-zumino",
                 "gl-2-1"):
        assert name in names
    assert names == sorted(names)
    assert get_entry("poincare-1-3").algebra.space.sdim == (10, 4)
    assert get_entry("gl-1-1").algebra == general_linear(1, 1)
    with pytest.raises(CatalogError):
        get_entry("de-sitter")


def test_poincare_dimensions():
    entry = build_poincare(Signature(1, 2))
    g = entry.algebra
    assert g.labels == ("M01", "M02", "M12", "e0", "e1", "e2", "s0", "s1")
    assert g.structure(g.index("s0"), g.index("s1")) == {g.index("e2"): 1}
    assert check_entry(entry).passed


def test_odd_commutative_poincare():
    entry = build_poincare(Signature(1, 3), gamma_choice=None)
    g = entry.algebra
    assert all(not g.structure(a, b) for a in g.odd_indices() for b in g.odd_indices())
    assert check_super_jacobi(g, sorted_triples=True).passed


def test_gamma_choice_out_of_range():
    with pytest.raises(CatalogError):
        normalized_gamma(Signature(1, 2), choice=5)


def test_general_linear_entry():
    entry = build_general_linear(2, 1)
    assert entry.algebra == general_linear(2, 1)
    assert entry.adapted is None
    assert check_entry(entry).passed


def test_fixture_matches_the_built_entry():
    imported = import_entry(FIXTURE)
    built = build_poincare(Signature(1, 2))
    assert imported.algebra == built.algebra
    assert imported.decomposition.h_indices == built.decomposition.h_indices
    assert imported.decomposition.m_indices == built.decomposition.m_indices
    assert imported.adapted is not None and imported.flux is None


def test_export_import_round_trip():
    for entry in (build_poincare(Signature(1, 3)), build_general_linear(1, 2)):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / f"{entry.name}.json"
            text = export_entry(entry, path)
            assert json.loads(path.read_text(encoding="utf-8")) == json.loads(text)
            back = import_entry(path)
        assert back.algebra == entry.algebra
        assert back.name == entry.name
        assert import_entry(text, deep=False).algebra == entry.algebra


def test_import_rejects_bad_data():
    data = json.loads(FIXTURE.read_text(encoding="utf-8"))
    bad_parity = copy.deepcopy(data)
    bad_parity["basis"][0]["parity"] = "sideways"
    with pytest.raises(CatalogError):
        import_entry(bad_parity)
    missing = copy.deepcopy(data)
    del missing["decomposition"]
    with pytest.raises(CatalogError):
        entry_from_dict(missing)
    with pytest.raises(CatalogError):
        import_entry("{not json")
    newer = dict(data, schema=2)
    with pytest.raises(CatalogError):
        entry_from_dict(newer)


def test_import_rejects_a_failing_algebra():
    data = json.loads(FIXTURE.read_text(encoding="utf-8"))
    for br in data["brackets"]:
        if (br["left"], br["right"]) == ("s0", "s1"):
            br["result"] = [{"basis": "e2", "coeff": "2"}]
    with pytest.raises(CatalogError):
        import_entry(data)


def test_plane_wave_dimensions(plane_wave):
    assert plane_wave.algebra.space.sdim == (38, 32)
    assert len(plane_wave.decomposition.h_indices) == 27


def test_plane_wave_displayed_brackets(plane_wave):
    report = plane_wave_spot_checks(plane_wave)
    assert report.passed, report.first_failure
    assert report.details["minus-minus"]["details"]["ratio"] not in (None, "0")
    assert report.details["q-action"]["quarter_block"] in ("ker(q.)", "ker(p.)")


def test_plane_wave_flux_and_spinor_connection(plane_wave):
    assert check_flux_invariance(plane_wave.decomposition, plane_wave.flux).passed
    assert spinor_connection_curvature(plane_wave.adapted).passed
    assert calibrate_flux(plane_wave.adapted, plane_wave.flux).passed


def test_plane_wave_jacobi(plane_wave):
    report = check_super_jacobi(plane_wave.algebra, sorted_triples=True)
    assert report.passed, report.first_failure


def test_plane_wave_conventions_come_from_closure(plane_wave):
    report = plane_wave.reports["calibration"]
    assert report.passed
    rows = report.details["conventions"]
    assert len(rows) == 4 * gamma_choices(SUPERGRAVITY)
    for row in rows:
        if row["closes"] and row["residual_entries"] == 0:
            assert any(name.startswith(row["name"]) for name in report.details["chosen"])
    assert any(not row["closes"] for row in rows)
    assert report.details["selected"]["conventions"]["clifford"] == 1


def test_freund_rubin_is_flat_and_calibrated(freund_rubin):
    a = freund_rubin.adapted
    assert freund_rubin.algebra.space.sdim == (11 + 6 + 21, 32)
    assert spinor_connection_curvature(a).passed
    assert check_flux_invariance(freund_rubin.decomposition, freund_rubin.flux).passed
    assert calibrate_flux(a, freund_rubin.flux).passed


def test_freund_rubin_jacobi(freund_rubin):
    assert check_super_jacobi(freund_rubin.algebra, sorted_triples=True).passed


def test_freund_rubin_half_coefficient_is_reported():
    entry = build_freund_rubin("4-7", sphere_coefficient=Fraction(1, 2))
    report = calibrate_flux(entry.adapted, entry.flux)
    assert not report.passed
    assert not entry.reports["calibration"].passed
    assert report.details["chosen"] == []
    assert report.first_failure["minimal"]["residual_entries"] > 0


def test_freund_rubin_arguments():
    with pytest.raises(ValueError):
        build_freund_rubin("5-6")
    with pytest.raises(ValueError):
        build_freund_rubin("7-4", sphere_coefficient=1)


def test_freund_rubin_seven_four():
    entry = build_freund_rubin("7-4")
    assert spinor_connection_curvature(entry.adapted).passed
    assert calibrate_flux(entry.adapted, entry.flux).passed


@pytest.fixture(scope="module")
def wess_zumino():
    return build_wess_zumino()


def test_wess_zumino(wess_zumino):
    g = wess_zumino.algebra
    assert g.space.sdim == (16, 8)
    report = check_super_jacobi(g, sorted_triples=True)
    assert report.passed, report.first_failure
    assert report.details["failures_by_parity"]["odd-odd-odd"] == 0
    assert any(g.structure(a, b) for a in g.odd_indices() for b in g.odd_indices())


def test_wess_zumino_scale(wess_zumino):
    g, h = wess_zumino.algebra, build_wess_zumino(2).algebra
    s = g.odd_indices()[0]
    for a in g.odd_indices():
        for b in g.odd_indices():
            assert h.structure(a, b) == {k: 2 * v for k, v in g.structure(a, b).items()}
    assert h.structure(s, g.index("d")) == g.structure(s, g.index("d"))
    with pytest.raises(ValueError):
        build_wess_zumino(0)


def test_twistor_spinor_data(wess_zumino):
    data = twistor_spinor_data(wess_zumino)
    assert sorted(data) == ["t0", "t1", "t2", "t3"]
    assert sorted(data["t0"]) == ["v0", "v1", "v2", "v3"]
    ##−[v, s'] lies in S
    assert all(label.startswith("s") for values in data["t0"].values() for label in values)
