import argparse
import json
import logging
import os
import sys
from pathlib import Path
from random import Random
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from src.catalog.entry import CatalogEntry, export_entry, import_entry
from src.catalog.plane_wave import plane_wave_spot_checks
from src.catalog.registry import get_entry, list_entries
from src.clifford.forms import schur_algebra
from src.clifford.gamma import build_gamma, certify_irreducible, check_clifford_relation, describe_rep
from src.clifford.signature import Signature, schur_dim_expected
from src.clifford.spin import check_xi_star, spin_algebra
from src.connection.curvature import connection_report, infinitesimal_holonomy, parallel_tensor_space
from src.connection.nomizu import (NomizuMap, canonical_nomizu, check_metric_parallel, invariant_metric,
                                   levi_civita_nomizu, natural_torsion_free, nomizu_space, supersymmetry_nomizu)
from src.connection.table import DEFAULT_REPRESENTATIVES, poincare_connection_table, render_tsv, table_row
from src.exactla.errors import ShapeError
from src.exactla.reports import CheckReport
from src.killing.adapted import (check_adapted, killing_spinor_jets, killing_spinor_space, killing_superalgebra_check,
                                 spinor_connection_curvature, supersymmetry_cross_check)
from src.killing.flux import calibrate_flux
from src.liesuper.algebra import check_super_jacobi
from src.pbw.enveloping import PBWAlgebra, check_confluence, random_words
from src.pbw.exterior import all_wedges
from src.pbw.koszul import verify_koszul_identities
from src.pbw.phi import phi_c_correspondence
from src.svf.fields import SplitDomain, check_left_homomorphism, check_left_right_supercommute, \
    check_right_antihomomorphism, field_table
from src.svf.hopf import hopf_translation

logger = logging.getLogger(__name__)

SCHEMA = 1
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

CONNECTIONS = ("canonical", "natural", "supersymmetry", "levi-civita")

Result = Tuple[Dict[str, Any], bool]


##get settings
def load_settings() -> Tuple[dict, Optional[str]]:
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(os.path.dirname(here))
    candidates = [
        os.path.join(os.getcwd(), "config", "settings.yaml"),
        os.path.join(root, "config", "settings.yaml"),
    ]
    for cfg in candidates:
        if os.path.exists(cfg):
            with open(cfg, "r", encoding="utf-8-sig") as f:
                return yaml.safe_load(f) or {}, cfg
    raise FileNotFoundError("settings.yaml not found in:\n  - " + "\n  - ".join(candidates))


def _settings() -> dict:
    try:
        config, path = load_settings()
        logger.debug(f"Using config: {path}")
        return config
    except FileNotFoundError as e:
        logger.warning(f"{e}; using defaults")
        return {}


def _progress() -> bool:
    return sys.stderr.isatty()


##inputs
def _entry(args) -> CatalogEntry:
    if args.catalog:
        return get_entry(args.catalog)
    if args.input:
        path = Path(args.input)
        if not path.exists():
            raise ValueError(f"input file {path} does not exist")
        return import_entry(path, deep=False)
    raise ValueError("one of --catalog NAME or --input FILE is required")


def _adapted(entry: CatalogEntry):
    if entry.adapted is None:
        raise ShapeError(f"{entry.name} carries no adapted supersymmetry data")
    return entry.adapted


def _signature(args) -> Signature:
    if not args.signature:
        raise ValueError("--signature R,S is required")
    return Signature.parse(args.signature)


def _connection(entry: CatalogEntry, name: str) -> Tuple[NomizuMap, Optional[Any]]:
    d = entry.decomposition
    if name == "canonical":
        return canonical_nomizu(d), None
    if name == "natural":
        return natural_torsion_free(d), None
    if name == "supersymmetry":
        return supersymmetry_nomizu(d), None
    metric = invariant_metric(d)
    if metric is None:
        raise ShapeError(f"{entry.name} has no nondegenerate invariant metric on m")
    return levi_civita_nomizu(d, metric), metric


def _report(report: CheckReport) -> Result:
    return report.to_dict(), report.passed


##subcommands
def cmd_jacobi(args, settings) -> Result:
    entry = _entry(args)
    return _report(check_super_jacobi(entry.algebra, progress=_progress(), sorted_triples=True))


def cmd_adapted_check(args, settings) -> Result:
    return _report(check_adapted(_adapted(_entry(args))))


def cmd_nomizu_dim(args, settings) -> Result:
    entry = _entry(args)
    space = nomizu_space(entry.decomposition)
    return dict(space.to_dict(), name=entry.name), True


def cmd_nomizu_table(args, settings) -> Result:
    if args.signature:
        rows = [table_row(Signature.parse(args.signature))]
    else:
        reps = (settings.get("nomizu_table") or {}).get("representatives") or DEFAULT_REPRESENTATIVES
        parallel = args.parallel or settings.get("parallel", 1)
        rows = poincare_connection_table({int(k): v for k, v in reps.items()}, parallel=int(parallel),
                                         progress=_progress())
    passed = all(row.D == row.expected for row in rows)
    return {"rows": [row.to_dict() for row in rows], "tsv": render_tsv(rows)}, passed


def cmd_curvature(args, settings) -> Result:
    entry = _entry(args)
    n, _ = _connection(entry, args.connection)
    rep = connection_report(n, holonomy=False)
    return {"name": entry.name, "connection": n.name, "curvature": rep.curvature_dict(),
            "flat": rep.flat.to_dict()}, rep.flat.details.get("criteria_agree", True)


def cmd_torsion(args, settings) -> Result:
    entry = _entry(args)
    n, metric = _connection(entry, args.connection)
    rep = connection_report(n, holonomy=False)
    out = {"name": entry.name, "connection": n.name, "torsion": rep.torsion_dict()}
    passed = True
    if metric is not None:
        parallel = check_metric_parallel(n, metric)
        out["metric_parallel"] = parallel.to_dict()
        passed = parallel.passed and not rep.torsion
    return out, passed


def cmd_holonomy(args, settings) -> Result:
    entry = _entry(args)
    n, _ = _connection(entry, args.connection)
    hol = infinitesimal_holonomy(n, max_depth=args.max_depth, progress=_progress())
    return {"name": entry.name, "connection": n.name, "holonomy": hol.to_dict()}, True


def cmd_parallel_tensors(args, settings) -> Result:
    entry = _entry(args)
    n, _ = _connection(entry, args.connection)
    r, s = (int(x) for x in args.type.split(","))
    tensors = parallel_tensor_space(n, r, s)
    return {"name": entry.name, "connection": n.name, "type": [r, s], "dim": len(tensors),
            "basis": [t.to_dict() for t in tensors]}, True


def cmd_pbw_verify(args, settings) -> Result:
    entry = _entry(args)
    g = entry.algebra
    alg = PBWAlgebra(g)
    report = verify_koszul_identities(g, args.max_degree, alg=alg, progress=_progress())
    props = settings.get("properties") or {}
    rng = Random(props.get("random_seed", 0))
    words = random_words(alg, int(props.get("random_words", 100)), int(props.get("max_word_length", 5)), rng)
    confluence = check_confluence(alg, words, rng)
    report.record(confluence["passed"], {"confluence": confluence["mismatches"][:1]})
    report.details["confluence"] = {"checked": confluence["checked"], "mismatches": len(confluence["mismatches"])}
    return _report(report)


def cmd_phi_verify(args, settings) -> Result:
    entry = _entry(args)
    g = entry.algebra
    alg = PBWAlgebra(g)
    odd = g.odd_indices()
    words = all_wedges(odd, len(odd) if args.max_degree is None else min(args.max_degree, len(odd)))
    elements = [args.element] if args.element else list(g.labels)
    report = CheckReport("phi-verify")
    for c in (0, 1, -1):
        for x in elements:
            report.merge(phi_c_correspondence(g, c, x, words, alg=alg), prefix=f"c={c} x={x}")
    return _report(report)


def cmd_svf_verify(args, settings) -> Result:
    entry = _entry(args)
    dom = SplitDomain.from_algebra(entry.algebra)
    report = CheckReport("svf")
    report.merge(check_left_homomorphism(dom))
    report.merge(check_right_antihomomorphism(dom))
    report.merge(check_left_right_supercommute(dom))
    hopf = hopf_translation(dom)
    report.merge(hopf.check_axioms())
    report.details["fields"] = field_table(dom)
    report.details["hopf"] = hopf.to_dict()
    return _report(report)


def cmd_clifford_info(args, settings) -> Result:
    rep = build_gamma(_signature(args))
    report = CheckReport("clifford")
    report.merge(check_clifford_relation(rep))
    report.merge(certify_irreducible(rep))
    report.merge(check_xi_star(spin_algebra(rep)))
    report.details["rep"] = describe_rep(rep)
    return _report(report)


def cmd_schur(args, settings) -> Result:
    sig = _signature(args)
    dim = len(schur_algebra(build_gamma(sig)))
    expected = schur_dim_expected(sig)
    return {"signature": [sig.r, sig.s], "class": sig.table_class, "dim": dim, "expected": expected}, \
        dim == expected


def cmd_killing_check(args, settings) -> Result:
    entry = _entry(args)
    a = _adapted(entry)
    report = CheckReport("killing")
    report.merge(killing_superalgebra_check(a))
    report.merge(spinor_connection_curvature(a))
    report.merge(supersymmetry_cross_check(a))
    if entry.name == "cahen-wallach":
        report.merge(plane_wave_spot_checks(entry))
    order = int((settings.get("killing") or {}).get("jet_order", 4))
    report.details["killing_spinors"] = len(killing_spinor_space(a))
    report.details["jets"] = killing_spinor_jets(a, a.spinor_indices[0], order)
    return _report(report)


def cmd_calibrate(args, settings) -> Result:
    entry = _entry(args)
    a = _adapted(entry)
    if "calibration" in entry.reports:
        return _report(entry.reports["calibration"])
    return _report(calibrate_flux(a, entry.flux))


def cmd_catalog_list(args, settings) -> Result:
    return {"entries": list_entries()}, True


def cmd_catalog_export(args, settings) -> Result:
    entry = get_entry(args.name)
    text = export_entry(entry, args.output)
    return json.loads(text), True


def _inputs(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--catalog", metavar="NAME", help="Catalog entry, e.g. poincare-1-2")
    src.add_argument("--input", metavar="FILE", help="JSON file in the catalog schema")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lie-superconnections",
        description="Exact computations with Lie superalgebras and invariant superconnections",
    )
    parser.add_argument("--log-level", default=None, help="Logging level, e.g. DEBUG")
    parser.add_argument("--format", choices=("json", "tsv", "text"), default=None)
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    def sub(name: str, fn: Callable, text: str, inputs: bool = True) -> argparse.ArgumentParser:
        p = subparsers.add_parser(name, help=text)
        if inputs:
            _inputs(p)
        p.add_argument("--format", choices=("json", "tsv", "text"), default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    sub("jacobi", cmd_jacobi, "Super-Jacobi identity on every basis triple")
    sub("adapted-check", cmd_adapted_check, "Spin lift, Dirac current and Jacobi of an adapted algebra")
    sub("nomizu-dim", cmd_nomizu_dim, "Dimension of the space of invariant connections")
    p = sub("nomizu-table", cmd_nomizu_table, "Invariant-connection dimensions of Poincare superspacetimes",
            inputs=False)
    p.add_argument("--signature", metavar="R,S", help="Single signature instead of the class table")
    p.add_argument("--parallel", type=int, default=None, help="Worker processes")
    for name, fn, text in (("curvature", cmd_curvature, "Curvature at the origin"),
                           ("torsion", cmd_torsion, "Torsion at the origin"),
                           ("holonomy", cmd_holonomy, "Infinitesimal holonomy algebra"),
                           ("parallel-tensors", cmd_parallel_tensors, "Parallel tensors of a given type")):
        p = sub(name, fn, text)
        p.add_argument("--connection", choices=CONNECTIONS, default="canonical")
        if name == "holonomy":
            p.add_argument("--max-depth", type=int, default=None)
        if name == "parallel-tensors":
            p.add_argument("--type", default="0,2", metavar="R,S", help="Contravariant,covariant degrees")
    p = sub("pbw-verify", cmd_pbw_verify, "Coderivation identities and normal-ordering confluence")
    p.add_argument("--max-degree", type=int, default=None)
    p = sub("phi-verify", cmd_phi_verify, "Correspondence of ad, L and R with the Phi_c operators")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--element", default=None, help="Basis label; every basis element by default")
    sub("svf-verify", cmd_svf_verify, "Left/right invariant fields and the translation Hopf superalgebra")
    for name, fn, text in (("clifford-info", cmd_clifford_info, "Gamma matrices and spin data"),
                           ("schur", cmd_schur, "Dimension of the Schur algebra of the spin module")):
        p = sub(name, fn, text, inputs=False)
        p.add_argument("--signature", metavar="R,S", required=True)
    sub("killing-check", cmd_killing_check, "Killing superalgebra, flat spinor connection and Killing spinors")
    sub("calibrate", cmd_calibrate, "Connection term against the supergravity formula per convention")

    cat = subparsers.add_parser("catalog", help="Shipped algebras")
    cat_sub = cat.add_subparsers(dest="catalog_command")
    cat_sub.required = True
    p = cat_sub.add_parser("list", help="Names of the shipped entries")
    p.add_argument("--format", choices=("json", "tsv", "text"), default=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_catalog_list)
    p = cat_sub.add_parser("export", help="Write an entry as JSON")
    p.add_argument("name")
    p.add_argument("--output", default=None, help="File to write besides standard output")
    p.add_argument("--format", choices=("json", "tsv", "text"), default=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_catalog_export)
    return parser


##renderers
def _text_lines(value: Any, prefix: str = "") -> List[str]:
    if isinstance(value, dict):
        out = []
        for k in sorted(value, key=str):
            out += _text_lines(value[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        out = []
        for k, v in enumerate(value):
            out += _text_lines(v, f"{prefix}[{k}]")
        return out
    return [f"{prefix}: {json.dumps(value, ensure_ascii=False) if isinstance(value, list) else value}"]


def render(payload: Dict[str, Any], fmt: str) -> str:
    if fmt == "tsv":
        if "tsv" in payload:
            return payload["tsv"]
        return "".join(line.replace(": ", "\t", 1) + "\n" for line in _text_lines(payload))
    body = {k: v for k, v in payload.items() if k != "tsv"}
    if fmt == "text":
        return "\n".join(_text_lines(body)) + "\n"
    return json.dumps(dict(body, schema=SCHEMA), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    """Parse argv, run one subcommand, write its report; 0 if every check passed, 1 on a failed check,
    2 on bad input."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as se:
        return EXIT_OK if se.code in (0, None) else EXIT_USAGE
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    settings = _settings()
    fmt = args.format or ("tsv" if args.command == "nomizu-table" else "json")
    try:
        payload, passed = args.fn(args, settings)
    except (ValueError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        out.write(render({"command": args.command, "error": str(e), "passed": False}, fmt))
        return EXIT_USAGE
    out.write(render(dict(payload, command=args.command), fmt))
    if not passed:
        logger.error(f"{args.command}: check failed")
        return EXIT_FAILED
    logger.info(f"{args.command}: passed")
    return EXIT_OK
