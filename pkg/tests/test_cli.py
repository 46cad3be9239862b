from pathlib import Path
import io
import json
import tempfile

from src.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, render, run
from src.connection.table import TSV_HEADER

FIXTURE = Path(__file__).resolve().parents[1] / "data" / "poincare-1-2.json"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_jacobi_on_a_catalog_entry():
    code, text = call("jacobi", "--catalog", "poincare-1-2")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["schema"] == 1
    assert data["command"] == "jacobi"
    assert data["passed"] is True
    assert data["failures"] == 0


def test_jacobi_on_an_input_file():
    code, text = call("jacobi", "--input", str(FIXTURE))
    assert code == EXIT_OK
    assert json.loads(text)["passed"] is True


def test_missing_inputs_are_usage_errors():
    code, text = call("jacobi")
    assert code == EXIT_USAGE
    assert "error" in json.loads(text)
    assert call("jacobi", "--input", "no/such/file.json")[0] == EXIT_USAGE
    assert call("jacobi", "--catalog", "de-sitter")[0] == EXIT_USAGE


def test_argument_errors():
    assert call("frobnicate")[0] == EXIT_USAGE
    assert call("clifford-info")[0] == EXIT_USAGE
    assert call("clifford-info", "--signature", "x,2")[0] == EXIT_USAGE
    assert call("jacobi", "--catalog", "gl-1-1", "--input", str(FIXTURE))[0] == EXIT_USAGE


def test_adapted_check_needs_adapted_data():
    code, text = call("adapted-check", "--catalog", "gl-2-1")
    assert code == EXIT_USAGE
    assert "adapted" in json.loads(text)["error"]
    assert call("adapted-check", "--catalog", "poincare-1-2")[0] == EXIT_OK


def test_catalog_list_and_export():
    code, text = call("catalog", "list")
    assert code == EXIT_OK
    assert "wess-zumino" in json.loads(text)["entries"]
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "entry.json"
        code, text = call("catalog", "export", "poincare-1-2", "--output", str(path))
        assert code == EXIT_OK
        written = json.loads(path.read_text(encoding="utf-8"))
    assert written["name"] == "poincare-1-2"
    assert json.loads(text)["basis"] == written["basis"]


def test_text_format():
    code, text = call("catalog", "list", "--format", "text")
    assert code == EXIT_OK
    assert "command: catalog" in text.splitlines()
    assert any(line.startswith("entries: [") for line in text.splitlines())
    code, text = call("--format", "text", "schur", "--signature", "1,3")
    assert code == EXIT_OK
    assert "signature: [1, 3]" in text.splitlines()


def test_clifford_info_and_schur():
    code, text = call("clifford-info", "--signature", "1,2")
    assert code == EXIT_OK
    assert json.loads(text)["passed"] is True
    code, text = call("schur", "--signature", "1,3")
    data = json.loads(text)
    assert code == EXIT_OK
    assert data["dim"] == data["expected"]


def test_nomizu_table_single_row_is_tsv():
    code, text = call("nomizu-table", "--signature", "1,3")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == TSV_HEADER
    assert lines[1].split("\t")[:3] == ["6", "1,3", "6"]


def test_flagged_table_row_fails():
    code, text = call("nomizu-table", "--signature", "2,1", "--format", "json")
    assert code == EXIT_FAILED
    data = json.loads(text)
    assert "tsv" not in data
    assert data["rows"][0]["D"] == 13


def test_connection_commands_on_poincare():
    code, text = call("curvature", "--catalog", "poincare-1-2")
    assert code == EXIT_OK
    assert json.loads(text)["flat"]["passed"] is True
    code, text = call("torsion", "--catalog", "poincare-1-2", "--connection", "natural")
    assert code == EXIT_OK
    assert json.loads(text)["torsion"] == {}
    code, text = call("holonomy", "--catalog", "poincare-1-2")
    assert code == EXIT_OK
    assert json.loads(text)["holonomy"]["dim"] == 0


def test_enveloping_algebra_commands():
    assert call("pbw-verify", "--catalog", "gl-2-1", "--max-degree", "2")[0] == EXIT_OK
    assert call("phi-verify", "--catalog", "gl-2-1", "--max-degree", "2", "--element", "E13")[0] == EXIT_OK


def test_svf_verify():
    code, text = call("svf-verify", "--input", str(FIXTURE))
    assert code == EXIT_OK
    assert json.loads(text)["details"]["hopf"]


def test_render_defaults_to_key_value_tsv():
    text = render({"name": "x", "dim": 3}, "tsv")
    assert text.splitlines() == ["dim\t3", "name\tx"]
    assert build_parser().parse_args(["catalog", "list"]).format is None
