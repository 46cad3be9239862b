from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union
import json
import logging

from src.clifford.gamma import build_gamma
from src.clifford.signature import Signature
from src.exactla.errors import CatalogError, ShapeError
from src.exactla.graded import GradedSpace
from src.exactla.rational import matrix_from_strings
from src.exactla.reports import CheckReport
from src.killing.adapted import (AdaptedSupersymmetryAlgebra, adapted_to_dict, check_adapted,
                                 killing_superalgebra_check, spinor_connection_curvature,
                                 supersymmetry_cross_check)
from src.killing.flux import FluxForm, calibrate_flux, check_flux_invariance
from src.liesuper.algebra import LieSuperalgebra, check_super_jacobi
from src.liesuper.decomposition import ReductiveDecomposition, check_reductive

logger = logging.getLogger(__name__)

SCHEMA = 1


@dataclass
class CatalogEntry:
    name: str
    algebra: LieSuperalgebra
    decomposition: ReductiveDecomposition
    adapted: Optional[AdaptedSupersymmetryAlgebra] = None
    flux: Optional[FluxForm] = None
    provenance: str = ""
    reports: Dict[str, CheckReport] = field(default_factory=dict)

    def summary(self) -> Dict[str, Any]:
        g = self.algebra
        return {"name": self.name, "dim": g.space.sdim_str(),
                "h": len(self.decomposition.h_indices), "adapted": self.adapted is not None,
                "flux": self.flux is not None}

    def to_dict(self) -> Dict[str, Any]:
        g = self.algebra
        out: Dict[str, Any] = {"schema": SCHEMA, "name": self.name}
        out.update(g.to_dict())
        out["decomposition"] = {"h": [g.labels[i] for i in self.decomposition.h_indices],
                                "m": [g.labels[i] for i in self.decomposition.m_indices]}
        out["adapted"] = adapted_to_dict(self.adapted) if self.adapted is not None else None
        out["flux"] = self.flux.to_dict() if self.flux is not None else None
        out["provenance"] = self.provenance
        return out


def check_entry(entry: CatalogEntry, deep: bool = True) -> CheckReport:
    """Super-Jacobi and reductivity, plus the adapted and flux checks where the entry carries them."""
    report = CheckReport(f"catalog:{entry.name}")
    jacobi = check_super_jacobi(entry.algebra, sorted_triples=True)
    report.merge(jacobi)
    report.merge(check_reductive(entry.decomposition))
    a = entry.adapted
    if a is not None:
        report.merge(check_adapted(a, jacobi=False))
        report.merge(supersymmetry_cross_check(a))
        try:
            report.merge(spinor_connection_curvature(a))
        except ShapeError as e:
            report.details["spinor-flatness"] = {"skipped": str(e)}
        if deep:
            report.merge(killing_superalgebra_check(a))
    if entry.flux is not None:
        report.merge(check_flux_invariance(entry.decomposition, entry.flux))
        if a is not None:
            calibration = calibrate_flux(a, entry.flux)
            entry.reports.setdefault("calibration", calibration)
            report.details["calibration"] = calibration.to_dict()
    entry.reports["checks"] = report
    logger.info(f"{entry.name}: {report.checked} checks, passed={report.passed}")
    return report


def export_entry(entry: CatalogEntry, path: Optional[Union[str, Path]] = None) -> str:
    text = json.dumps(entry.to_dict(), indent=2, ensure_ascii=False)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"exported {entry.name} to {path}")
    return text


def entry_from_dict(data: Dict[str, Any]) -> CatalogEntry:
    try:
        if int(data.get("schema", SCHEMA)) != SCHEMA:
            raise CatalogError(f"unsupported schema {data.get('schema')!r}")
        g = LieSuperalgebra.from_dict(data)
        dec = data["decomposition"]
        d = ReductiveDecomposition.from_labels(g, dec["h"], dec["m"])
        adapted = None
        if data.get("adapted"):
            ad = data["adapted"]
            rep = build_gamma(Signature(*ad["signature"]))
            adapted = AdaptedSupersymmetryAlgebra(d, rep, matrix_from_strings(ad["frame"]),
                                                  tuple(g.index(x) for x in ad["spinors"]))
        flux = None
        if data.get("flux"):
            m0 = adapted.m0_space() if adapted is not None else \
                GradedSpace.even([g.labels[i] for i in d.m_indices if g.parities[i] == 0])
            frame = adapted.frame if adapted is not None else None
            flux = FluxForm.from_dict(m0, data["flux"], frame)
        return CatalogEntry(str(data["name"]), g, d, adapted, flux, str(data.get("provenance", "")))
    except CatalogError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise CatalogError(f"malformed catalog data: {e}") from e


def import_entry(source: Union[str, Path, Dict[str, Any]], deep: bool = True) -> CatalogEntry:
    """Parse an exported entry and re-run its checks; CatalogError when parsing or a check fails."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text(encoding="utf-8-sig") if isinstance(source, Path) or \
            (isinstance(source, str) and not source.lstrip().startswith("{")) else source
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CatalogError(f"invalid JSON: {e}") from e
    entry = entry_from_dict(data)
    report = check_entry(entry, deep=deep)
    if not report.passed:
        raise CatalogError(f"imported entry {entry.name} fails its checks: {report.first_failure}")
    return entry
