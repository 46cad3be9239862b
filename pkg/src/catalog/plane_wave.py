from fractions import Fraction
from itertools import combinations
from typing import List, Optional
import logging
import numpy as np

from src.catalog.assemble import (assemble_supersymmetry_algebra, calibrated_assembly, even_algebra_from_actions,
                                  lift_isotropy)
from src.catalog.entry import CatalogEntry
from src.catalog.poincare import gamma_choices, normalized_gamma
from src.clifford.forms import invariant_bilinear_forms
from src.clifford.gamma import build_gamma
from src.exactla.errors import ShapeError
from src.exactla.graded import GradedSpace
from src.exactla.rational import is_zero, qzeros
from src.exactla.reports import CheckReport
from src.exactla.solve import kernel
from src.killing.flux import SUPERGRAVITY, Conventions, FluxForm, supergravity_connection_term

logger = logging.getLogger(__name__)

TRANSVERSE = 9
##B = diag(1/9 x3, 1/36 x6) on the transverse directions
B = tuple(Fraction(1, 9) if i < 3 else Fraction(1, 36) for i in range(TRANSVERSE))

M0_LABELS = ["p", "q"] + [f"e{i}" for i in range(1, TRANSVERSE + 1)]


def _h_labels() -> List[str]:
    dual = [f"e{i}*" for i in range(1, TRANSVERSE + 1)]
    rot = [f"M{i}_{j}" for block in ((1, 2, 3), tuple(range(4, TRANSVERSE + 1))) for i, j in combinations(block, 2)]
    return dual + rot


def _frame() -> np.ndarray:
    """p = u0 + u10, q = (u0 − u10)/2, e_i = u_i."""
    P = qzeros(11, 11)
    P[0, 0] = P[10, 0] = Fraction(1)
    P[0, 1] = Fraction(1, 2)
    P[10, 1] = Fraction(-1, 2)
    for i in range(1, TRANSVERSE + 1):
        P[i, i + 1] = Fraction(1)
    return P


def _actions() -> List[np.ndarray]:
    pos = {x: k for k, x in enumerate(M0_LABELS)}
    out = []
    for i in range(1, TRANSVERSE + 1):
        ##[e_i*, q] = −B_i e_i, [e_i*, e_i] = −B_i p
        m = qzeros(11, 11)
        m[pos[f"e{i}"], pos["q"]] = -B[i - 1]
        m[pos["p"], pos[f"e{i}"]] = -B[i - 1]
        out.append(m)
    for block in ((1, 2, 3), tuple(range(4, TRANSVERSE + 1))):
        for i, j in combinations(block, 2):
            ##[M_ij, e_k] = −δ_ik e_j + δ_jk e_i
            m = qzeros(11, 11)
            m[pos[f"e{j}"], pos[f"e{i}"]] = Fraction(-1)
            m[pos[f"e{i}"], pos[f"e{j}"]] = Fraction(1)
            out.append(m)
    return out


def plane_wave_flux() -> FluxForm:
    """F = −q*∧e1*∧e2*∧e3*."""
    space = GradedSpace.even(M0_LABELS)
    return FluxForm(space, {(1, 2, 3, 4): Fraction(-1)}, _frame())


def build_cahen_wallach() -> CatalogEntry:
    """Maximally supersymmetric plane wave in eleven dimensions, 38|32, under the calibrated conventions."""
    rep = build_gamma(SUPERGRAVITY)
    h_labels = _h_labels()
    brackets = {("q", f"e{i}"): {f"e{i}*": -1} for i in range(1, TRANSVERSE + 1)}
    g0 = even_algebra_from_actions(h_labels, _actions(), M0_LABELS, brackets)
    flux = plane_wave_flux()
    n0 = len(M0_LABELS)
    spinors = [f"Q{a}" for a in range(rep.spin_dim)]
    lift = lift_isotropy(rep, _frame(), _actions())

    def assemble(conv: Conventions, form: int):
        C = [supergravity_connection_term(rep, flux, [1 if j == k else 0 for j in range(n0)], conv)
             for k in range(n0)]
        return assemble_supersymmetry_algebra(g0, h_labels, M0_LABELS, rep, _frame(), C,
                                              normalized_gamma(SUPERGRAVITY, form), spinors, lift=lift)

    a, calibration, conv, form = calibrated_assembly(assemble, flux, range(gamma_choices(SUPERGRAVITY)))
    provenance = ("Cahen-Wallach plane wave: E spanned by e1..e9, isotropy E* + so(3) on e1..e3 + so(6) on e4..e9 "
                  "(the second rotation block of the source uses the index range 4..11 and is re-indexed to 4..9); "
                  "B = diag(1/9 x3, 1/36 x6); frame p = u0 + u10, q = (u0 - u10)/2, e_i = u_i; "
                  "[X,s] = (-1/12 X^F# + 1/6 (i_X F)#).s with F = -q*^e1*^e2*^e3* "
                  f"under {conv.name}, gamma form {form}; "
                  "odd-odd bracket: Dirac current plus the isotropy part solved from the even-odd-odd identity; "
                  "[e_i, Q-] and [e_i*, Q-] vanish because both operators contain p.")
    logger.info(f"built cahen-wallach: {a.algebra.space.sdim_str()}")
    entry = CatalogEntry("cahen-wallach", a.algebra, a.decomposition, a, flux, provenance)
    entry.reports["calibration"] = calibration
    return entry


def _ratio(M: np.ndarray, T: np.ndarray, vectors=None) -> Optional[Fraction]:
    """c with M·v = c·T·v for every v (every basis vector when None), or None."""
    vectors = list(np.eye(T.shape[1], dtype=int).astype(object)) if vectors is None else vectors
    c = None
    for v in vectors:
        mv, tv = M.dot(v), T.dot(v)
        if c is None:
            k = next((k for k, x in enumerate(tv) if x != 0), None)
            if k is None:
                if not is_zero(mv):
                    return None
                continue
            c = Fraction(mv[k]) / tv[k]
        if not is_zero(mv - tv * c):
            return None
    return c


def plane_wave_spot_checks(entry: CatalogEntry) -> CheckReport:
    """Displayed brackets, up to the per-family signs the calibrated conventions fix.

    [q,·] acts as ¼I and 1/12 I on the two halves ker(q·), ker(p·) (which half carries ¼ is recorded),
    [p,Q] = 0, C_{e_i} = ±1/6 I e_i p for i ≤ 3 and ±1/12 I e_i p above, [e_i*,Q] = ½B_i e_i p·Q,
    [M_ij,Q] = ½ e_i e_j·Q and [Q-,Q-] ∝ (Q-, q·Q-)p on Q- = ker(p·). I = e1e2e3.
    """
    a = entry.adapted
    if a is None or a.rep.signature != SUPERGRAVITY:
        raise ShapeError(f"{entry.name} is not an eleven-dimensional adapted algebra")
    rep = a.rep
    g = a.algebra
    gp = rep.gammas[0] + rep.gammas[10]
    gq = (rep.gammas[0] - rep.gammas[10]) * Fraction(1, 2)
    I = rep.product([1, 2, 3])
    report = CheckReport("plane-wave")
    Cq = a.C(M0_LABELS.index("q"))
    on_q, on_p = _ratio(Cq, I, kernel(gq)), _ratio(Cq, I, kernel(gp))
    sizes = {abs(c) for c in (on_q, on_p) if c is not None}
    report.record(on_q is not None and on_p is not None and sizes == {Fraction(1, 4), Fraction(1, 12)},
                  {"bracket": "[q,Q]", "ker(q.)": str(on_q), "ker(p.)": str(on_p)})
    report.details["q-action"] = {"ker(q.)": str(on_q), "ker(p.)": str(on_p),
                                  "quarter_block": "ker(q.)" if on_q is not None and abs(on_q) == Fraction(1, 4)
                                  else "ker(p.)"}
    report.record(is_zero(a.C(M0_LABELS.index("p"))), {"bracket": "[p,Q]"})
    signs = {"low": set(), "high": set()}
    for i in range(1, TRANSVERSE + 1):
        ei = rep.gammas[i]
        size = Fraction(1, 6) if i <= 3 else Fraction(1, 12)
        c = _ratio(a.C(M0_LABELS.index(f"e{i}")), I.dot(ei).dot(gp))
        ok = c is not None and abs(c) == size
        if ok:
            signs["low" if i <= 3 else "high"].add(1 if c > 0 else -1)
        report.record(ok, {"bracket": f"[e{i},Q]", "ratio": str(c)})
        lift = a.on_spinors(g.index(f"e{i}*"))
        report.record(is_zero(lift - ei.dot(gp) * (B[i - 1] / 2)), {"bracket": f"[e{i}*,Q]"})
    for family, found in signs.items():
        report.record(len(found) <= 1, {"bracket": f"[e_i,Q] {family} block signs", "signs": sorted(found)})
    report.details["e-signs"] = {family: sorted(found) for family, found in signs.items()}
    for block in ((1, 2, 3), tuple(range(4, TRANSVERSE + 1))):
        for i, j in combinations(block, 2):
            want = rep.gammas[i].dot(rep.gammas[j]) * Fraction(1, 2)
            report.record(is_zero(a.on_spinors(g.index(f"M{i}_{j}")) - want), {"bracket": f"[M{i}_{j},Q]"})
    report.merge(_minus_minus(entry, gp, gq))
    return report


def _minus_minus(entry: CatalogEntry, gp: np.ndarray, gq: np.ndarray) -> CheckReport:
    """[s,t] for s,t in ker(p·) equals λ·β(s, q·t)·p for one nonzero constant λ."""
    a = entry.adapted
    g = a.algebra
    beta = invariant_bilinear_forms(a.rep, "scalar")[0].coefficients[0]
    p_index = g.index("p")
    report = CheckReport("minus-minus")
    basis = kernel(gp)
    values = []
    for x in range(len(basis)):
        for y in range(x, len(basis)):
            s = {a.spinor_indices[c]: v for c, v in enumerate(basis[x]) if v != 0}
            t = {a.spinor_indices[c]: v for c, v in enumerate(basis[y]) if v != 0}
            values.append(((x, y), g.bracket_sparse(s, t), basis[x].dot(beta).dot(gq.dot(basis[y]))))
    ratio = next((br.get(p_index, Fraction(0)) / pairing for _, br, pairing in values if pairing != 0), None)
    report.record(bool(ratio), {"ratio": str(ratio)})
    for pair, br, pairing in values:
        ok = set(br) <= {p_index} and br.get(p_index, Fraction(0)) == (ratio or 0) * pairing
        report.record(ok, {"pair": list(pair), "bracket": g.describe(br)})
    report.details["ratio"] = str(ratio) if ratio is not None else None
    return report
