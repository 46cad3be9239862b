from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.clifford.gamma import CliffordRep, clifford_of_multivector
from src.clifford.signature import Signature
from src.exactla.errors import CatalogError, DimensionMismatchError, ShapeError
from src.exactla.graded import GradedSpace
from src.exactla.rational import Q, ZERO, abs_sum, as_qmatrix, fmt_rational, nonzero_count, \
    permutation_sign, qeye, qzeros, sort_with_sign
from src.exactla.reports import CheckReport
from src.exactla.solve import inverse
from src.killing.adapted import spinor_connection_curvature
from src.liesuper.algebra import check_super_jacobi
from src.liesuper.decomposition import ReductiveDecomposition

logger = logging.getLogger(__name__)

SUPERGRAVITY = Signature(1, 10)


@dataclass(frozen=True)
class Conventions:
    """Sign choices entering the supergravity connection term."""
    clifford: int = 1
    flux: int = 1
    musical: int = 1

    @property
    def name(self) -> str:
        sym = {1: "+", -1: "-"}
        return f"clifford{sym[self.clifford]} flux{sym[self.flux]} musical{sym[self.musical]}"

    @property
    def effective(self) -> Tuple[int, int]:
        """(overall sign, sign of the contraction term against the wedge term)."""
        return self.flux, self.clifford * self.musical

    def to_dict(self) -> dict:
        return {"clifford": self.clifford, "flux": self.flux, "musical": self.musical}


ALL_CONVENTIONS: Tuple[Conventions, ...] = tuple(
    Conventions(c, f, m) for c in (1, -1) for f in (1, -1) for m in (1, -1))


@dataclass
class FluxForm:
    """Alternating 4-form on m0: Σ_I F_I e^I over increasing index tuples of the m0 basis.

    `frame` holds the m0 basis vectors as columns in orthonormal coordinates.
    """
    space: GradedSpace
    components: Dict[Tuple[int, ...], Fraction]
    frame: Optional[np.ndarray] = None
    degree: int = 4

    def __post_init__(self):
        clean = {}
        for key, c in self.components.items():
            if len(key) != self.degree:
                raise DimensionMismatchError(f"component {key} of a {self.degree}-form")
            sign, ordered = sort_with_sign(tuple(key))
            if sign == 0:
                continue
            c = Q(c) * sign
            if c != 0:
                clean[ordered] = clean.get(ordered, ZERO) + c
        self.components = {k: v for k, v in clean.items() if v != 0}
        n = self.space.dim
        self.frame = qeye(n) if self.frame is None else as_qmatrix(self.frame)
        if self.frame.shape != (n, n):
            raise DimensionMismatchError(f"frame of shape {self.frame.shape} for a {n}-dimensional space")

    def is_zero(self) -> bool:
        return not self.components

    def value(self, key: Sequence[int]) -> Fraction:
        sign, ordered = sort_with_sign(tuple(key))
        return sign * self.components.get(ordered, ZERO) if sign else ZERO

    def scaled(self, c) -> "FluxForm":
        return FluxForm(self.space, {k: v * Q(c) for k, v in self.components.items()}, self.frame, self.degree)

    def orthonormal_components(self) -> Dict[Tuple[int, ...], Fraction]:
        """Components on the orthonormal coframe: F(w_1..w_k) through the k×k minors of the inverse frame."""
        inv = inverse(self.frame)
        n = self.space.dim
        out = {}
        for cols in combinations(range(n), self.degree):
            total = ZERO
            for rows, c in self.components.items():
                minor = ZERO
                for perm in permutations(range(self.degree)):
                    term = Fraction(permutation_sign(perm))
                    for r, k in zip(rows, perm):
                        term *= inv[r, cols[k]]
                        if term == 0:
                            break
                    minor += term
                total += c * minor
            if total != 0:
                out[cols] = total
        return out

    def to_dict(self) -> dict:
        return {"degree": self.degree, "components": [
            {"index": [self.space.labels[i] for i in key], "coeff": fmt_rational(c)}
            for key, c in sorted(self.components.items())]}

    @classmethod
    def from_dict(cls, space: GradedSpace, data: dict, frame=None) -> "FluxForm":
        comps = {tuple(space.index(x) for x in item["index"]): Q(str(item["coeff"]))
                 for item in data.get("components", [])}
        return cls(space, comps, frame, int(data.get("degree", 4)))


def check_flux_invariance(d: ReductiveDecomposition, flux: FluxForm) -> CheckReport:
    """Derivation action (b·F)(X_1..X_4) = −Σ F(.., [b,X_i], ..) vanishes for every b in h."""
    g = d.algebra
    m0 = [a for a, i in enumerate(d.m_indices) if g.parities[i] == 0]
    if len(m0) != flux.space.dim:
        raise DimensionMismatchError(f"flux on a {flux.space.dim}-dimensional space, m0 has {len(m0)}")
    report = CheckReport("flux-invariance")
    for i in d.h_indices:
        ad = d.ad_on_m(i)[np.ix_(m0, m0)]
        for key in combinations(range(len(m0)), flux.degree):
            total = ZERO
            for slot, a in enumerate(key):
                for j in range(len(m0)):
                    if ad[j, a] != 0:
                        total -= ad[j, a] * flux.value(key[:slot] + (j,) + key[slot + 1:])
            report.record(total == 0, {"h": g.labels[i], "index": [flux.space.labels[a] for a in key]})
    logger.info(f"flux invariance: {report.checked} components, passed={report.passed}")
    return report


def _raise(components: Dict[Tuple[int, ...], Fraction], eta: Sequence[int],
           metric: int) -> Dict[Tuple[int, ...], Fraction]:
    out = {}
    for key, c in components.items():
        sign = metric ** len(key)
        for a in key:
            sign *= eta[a]
        out[key] = c * sign
    return out


def supergravity_connection_term(rep: CliffordRep, flux: FluxForm, x,
                                 conventions: Conventions = Conventions()) -> np.ndarray:
    """(−1/12 X∧F♯ + 1/6 (i_X F)♯)· as a matrix on spinors; x is given in m0 coordinates.

    Indices are raised with the metric the Clifford generators square against: η for clifford+,
    −η for clifford−, negated once more per index for musical−.
    """
    if rep.signature != SUPERGRAVITY:
        raise ShapeError(f"the supergravity connection term lives in signature {SUPERGRAVITY}, got {rep.signature}")
    size = rep.spin_dim
    if flux.is_zero():
        return qzeros(size, size)
    xv = np.asarray([Q(v) for v in x], dtype=object)
    if xv.shape != (flux.space.dim,):
        raise DimensionMismatchError(f"vector of length {xv.shape[0]} on a {flux.space.dim}-dimensional m0")
    x_on = flux.frame.dot(xv)
    eta = rep.eta
    metric = conventions.clifford * conventions.musical
    f_on = {k: v * conventions.flux for k, v in flux.orthonormal_components().items()}
    ##X∧F♯ with X the vector itself
    f_sharp = _raise(f_on, eta, metric)
    wedge: Dict[Tuple[int, ...], Fraction] = {}
    for a, xa in enumerate(x_on):
        if xa == 0:
            continue
        for key, c in f_sharp.items():
            sign, ordered = sort_with_sign((a,) + key)
            if sign:
                wedge[ordered] = wedge.get(ordered, ZERO) + sign * xa * c
    ##i_X F as a form, then raised
    contraction: Dict[Tuple[int, ...], Fraction] = {}
    for key, c in f_on.items():
        for slot, a in enumerate(key):
            if x_on[a] != 0:
                rest = key[:slot] + key[slot + 1:]
                contraction[rest] = contraction.get(rest, ZERO) + (-1) ** slot * x_on[a] * c
    contraction = _raise({k: v for k, v in contraction.items() if v != 0}, eta, metric)
    out = clifford_of_multivector(rep, wedge) * Fraction(-1, 12)
    out = out + clifford_of_multivector(rep, contraction) * Fraction(1, 6)
    return out


def inequivalent_conventions(conventions: Sequence[Conventions] = ALL_CONVENTIONS) -> List[List[Conventions]]:
    """Group conventions producing the same connection term; the first member represents its class."""
    classes: Dict[Tuple[int, int], List[Conventions]] = {}
    for conv in conventions:
        classes.setdefault(conv.effective, []).append(conv)
    return list(classes.values())


def closure_check(a) -> CheckReport:
    """Odd-odd-odd super-Jacobi and spinor flatness: the identities a wrong convention breaks."""
    report = CheckReport("closure")
    g = a.algebra
    report.merge(check_super_jacobi(g, indices=g.odd_indices(), sorted_triples=True), "odd-jacobi")
    try:
        report.merge(spinor_connection_curvature(a))
    except ShapeError as exc:
        report.details["spinor-flatness"] = {"skipped": str(exc)}
    return report


def _residual(a, flux: Optional[FluxForm], conv: Conventions) -> Tuple[int, Fraction, Optional[str]]:
    n0 = len(a.m0_indices)
    size = a.rep.spin_dim
    entries, total, first = 0, ZERO, None
    for k in range(n0):
        if flux is None or flux.is_zero():
            term = qzeros(size, size)
        else:
            term = supergravity_connection_term(a.rep, flux, [1 if j == k else 0 for j in range(n0)], conv)
        diff = a.C(k) - term
        count = nonzero_count(diff)
        if count and first is None:
            first = a.algebra.labels[a.m0_indices[k]]
        entries += count
        total += abs_sum(diff)
    return entries, total, first


def calibrate_flux(adapted, flux: Optional[FluxForm], conventions: Sequence[Conventions] = ALL_CONVENTIONS,
                   assemble: Optional[Callable[[Conventions, int], object]] = None,
                   forms: Sequence[int] = (0,)) -> CheckReport:
    """Residual C_X − (supergravity term)(X) and closure of the algebra, per inequivalent convention.

    Without `assemble` the given adapted algebra is scored against every convention class. With it,
    `assemble(conventions, form)` builds a candidate per class and admissible Γ choice in `forms`;
    CatalogError from a candidate marks the choice as failing. A choice is chosen when its residual
    vanishes and the closure check passes; every chosen choice is recorded and `selected` is the first.
    """
    report = CheckReport("calibration")
    table = []
    chosen = []
    selected = None
    given_closure = None
    for members in inequivalent_conventions(conventions):
        conv = members[0]
        for form in (forms if assemble is not None else (None,)):
            row = {"conventions": conv.to_dict(), "name": conv.name,
                   "equivalent": [m.name for m in members[1:]], "form": form}
            try:
                a = adapted if assemble is None else assemble(conv, form)
            except CatalogError as exc:
                row.update({"residual_entries": None, "error": str(exc), "closes": False})
                logger.warning(f"calibration {conv.name} form {form}: {exc}")
                table.append(row)
                continue
            entries, total, first = _residual(a, flux, conv)
            if assemble is None:
                if given_closure is None:
                    given_closure = closure_check(a)
                closure = given_closure
            else:
                closure = closure_check(a)
            row.update({"residual_entries": entries, "residual_abs_sum": fmt_rational(total),
                        "first_direction": first, "closes": closure.passed,
                        "closure_failures": closure.failures, "first_closure_failure": closure.first_failure})
            table.append(row)
            if entries == 0 and closure.passed:
                chosen.append(row["name"] if form is None else f"{row['name']} form{form}")
                if selected is None:
                    selected = {"conventions": conv.to_dict(), "form": form}
            else:
                logger.warning(f"calibration {conv.name} form {form}: {entries} residual entries "
                               f"(first at {first}), {closure.failures} closure failures")
    scored = [row for row in table if row["residual_entries"] is not None]
    if scored:
        minimal = min(scored, key=lambda t: (not t["closes"], t["residual_entries"]))
    else:
        minimal = table[0] if table else {}
    report.record(bool(chosen), {"minimal": minimal})
    report.details["conventions"] = table
    report.details["chosen"] = chosen
    report.details["selected"] = selected
    return report


def selected_choice(report: CheckReport) -> Optional[Tuple[Conventions, Optional[int]]]:
    sel = report.details.get("selected")
    if not sel:
        return None
    return Conventions(**sel["conventions"]), sel["form"]
