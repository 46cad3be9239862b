from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union
import logging

from tqdm import tqdm

from src.exactla.errors import ParityError
from src.exactla.rational import ZERO, fmt_rational, sort_with_sign
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra, Sparse, sparse_add, sparse_scale
from src.pbw.enveloping import PBWAlgebra, UEAElement
from src.pbw.exterior import ExteriorElement, Wedge, all_wedges, wedge_coproduct
from src.pbw.series import ALPHA, EPSILON, THETA, BernoulliSeries
from src.pbw.symmetrize import Presentation, gamma_symmetrize, underline_gamma

logger = logging.getLogger(__name__)


def nested_ad_sum(g: LieSuperalgebra, letters: Sequence[int], x: Sparse,
                  memo: Optional[Dict[Tuple[int, ...], Sparse]] = None) -> Sparse:
    """Σ_σ K(σ) [b_σ1,[b_σ2,…[b_σk, x]]] with K the Koszul sign of the reordering."""
    memo = {} if memo is None else memo
    letters = tuple(letters)
    if letters in memo:
        return memo[letters]
    if not letters:
        return dict(x)
    out: Sparse = {}
    passed = 0
    for i, b in enumerate(letters):
        ##moving b_i to the front crosses the odd letters before it
        sign = -1 if g.parities[b] and passed % 2 else 1
        inner = nested_ad_sum(g, letters[:i] + letters[i + 1:], x, memo)
        out = sparse_add(out, g.bracket_sparse({b: Fraction(1)}, inner), sign)
        passed += g.parities[b]
    memo[letters] = out
    return out


@dataclass
class FormalVectorField:
    """A map Λ(g_1) → g tabulated on basis wedges."""
    algebra: LieSuperalgebra
    table: Dict[Wedge, Sparse] = field(default_factory=dict)
    parity: int = 0

    def value(self, w: Wedge) -> Sparse:
        return self.table.get(tuple(w), {})

    def evaluate(self, v: ExteriorElement) -> Sparse:
        out: Sparse = {}
        for w, c in v.terms.items():
            out = sparse_add(out, self.value(w), c)
        return out

    def support_degrees(self):
        return sorted({len(w) for w in self.table})

    def to_dict(self) -> Dict[str, Dict[str, str]]:
        labels = self.algebra.labels
        return {"∧".join(labels[i] for i in w) or "1": self.algebra.describe(x)
                for w, x in sorted(self.table.items(), key=lambda t: (len(t[0]), t[0]))}


def _index(g: LieSuperalgebra, a: Union[int, str]) -> int:
    i = g.index(a) if isinstance(a, str) else int(a)
    if not g.parities[i]:
        raise ParityError(f"{g.labels[i]} is even; formal fields are attached to odd elements")
    return i


def formal_field(g: LieSuperalgebra, a: Union[int, str], series: BernoulliSeries,
                 max_degree: Optional[int] = None) -> FormalVectorField:
    """v = b_1∧…∧b_k ↦ coefficient_k · Σ_σ sgn(σ) ad b_σ(1)∘…∘ad b_σ(k)(a)."""
    i = _index(g, a)
    odd = g.odd_indices()
    top = len(odd) if max_degree is None else max_degree
    memo: Dict[Tuple[int, ...], Sparse] = {}
    table: Dict[Wedge, Sparse] = {}
    for w in all_wedges(odd, top):
        coef = series.coefficient(len(w))
        if coef == 0:
            continue
        val = sparse_scale(nested_ad_sum(g, w, {i: Fraction(1)}, memo), coef)
        if val:
            table[w] = val
    logger.debug(f"{series.name} field of {g.labels[i]}: {len(table)} nonzero wedges")
    return FormalVectorField(g, table, series.value_parity)


def _as_wedge_terms(v) -> Dict[Wedge, Fraction]:
    if isinstance(v, ExteriorElement):
        return v.terms
    return ExteriorElement.basis(tuple(v)).terms


def coderivation_left(g: LieSuperalgebra, a, v, fields: Optional[Tuple[FormalVectorField, FormalVectorField]] = None) -> Presentation:
    """1 ⊗ v ↦ Σ θ(v_(1)) ⊗ v_(2) + 1 ⊗ ε(v_(1))∧v_(2); its γ̲-image is a·γ(v)."""
    theta, eps = fields or (formal_field(g, a, THETA), formal_field(g, a, EPSILON))
    out: Presentation = {}
    for w, c in _as_wedge_terms(v).items():
        for sign, v1, v2 in wedge_coproduct(w):
            for k, x in theta.value(v1).items():
                _accumulate(out, ((k,), v2), sign * c * x)
            for k, x in eps.value(v1).items():
                s, ordered = sort_with_sign((k,) + v2)
                if s:
                    _accumulate(out, ((), ordered), s * sign * c * x)
    return out


def coderivation_right(alg: PBWAlgebra, a, pres: Presentation,
                       fields: Optional[Tuple[FormalVectorField, FormalVectorField]] = None) -> Presentation:
    """u ⊗ v ↦ Σ u ⊗ α(v_(1))∧v_(2) − u·θ(v_(1)) ⊗ v_(2); its γ̲-image is (−1)^{|v|} u·γ(v)·a."""
    g = alg.g
    theta, alpha = fields or (formal_field(g, a, THETA), formal_field(g, a, ALPHA))
    out: Presentation = {}
    for (u, w), c in pres.items():
        for sign, v1, v2 in wedge_coproduct(w):
            for k, x in theta.value(v1).items():
                for word, y in alg._normal(tuple(u) + (k,)).items():
                    _accumulate(out, (word, v2), -sign * c * x * y)
            for k, x in alpha.value(v1).items():
                s, ordered = sort_with_sign((k,) + v2)
                if s:
                    _accumulate(out, (tuple(u), ordered), s * sign * c * x)
    return out


def _accumulate(out: Presentation, key, value):
    v = out.get(key, ZERO) + value
    if v == 0:
        out.pop(key, None)
    else:
        out[key] = v


def verify_koszul_identities(g: LieSuperalgebra, max_degree: Optional[int] = None,
                             alg: Optional[PBWAlgebra] = None, progress: bool = False) -> CheckReport:
    """Compare a·γ(v) and (−1)^{|v|}γ(v)·a with the coderivation formulas for every odd a and wedge v."""
    alg = alg or PBWAlgebra(g)
    odd = g.odd_indices()
    top = len(odd) if max_degree is None else min(max_degree, len(odd))
    wedges = all_wedges(odd, top)
    report = CheckReport("koszul-identities")
    left_report, right_report = CheckReport("left"), CheckReport("right")
    logger.info(f"koszul identities: {len(odd)} odd generators, {len(wedges)} wedges up to degree {top}")
    for a in tqdm(odd, desc="koszul", disable=not progress, leave=False):
        theta = formal_field(g, a, THETA, top)
        eps = formal_field(g, a, EPSILON, top)
        alpha = formal_field(g, a, ALPHA, top)
        gen = alg.generator(a)
        for w in wedges:
            gv = gamma_symmetrize(alg, ExteriorElement.basis(w))
            label = "∧".join(g.labels[b] for b in w) or "1"
            lhs = gen * gv
            rhs = underline_gamma(alg, coderivation_left(g, a, w, (theta, eps)))
            left_report.record(lhs == rhs, {"a": g.labels[a], "v": label, "lhs": str(lhs), "rhs": str(rhs)})
            lhs = (gv * gen).scaled((-1) ** len(w))
            rhs = underline_gamma(alg, coderivation_right(alg, a, {((), w): Fraction(1)}, (theta, alpha)))
            right_report.record(lhs == rhs, {"a": g.labels[a], "v": label, "lhs": str(lhs), "rhs": str(rhs)})
    report.merge(left_report)
    report.merge(right_report)
    report.details["max_degree"] = top
    report.details["wedges"] = len(wedges)
    if not report.passed:
        logger.warning(f"koszul identities: {report.failures} discrepancies, first {report.first_failure}")
    return report


def presentation_text(g: LieSuperalgebra, pres: Presentation) -> str:
    if not pres:
        return "0"
    parts = []
    for (u, w), c in sorted(pres.items(), key=lambda t: (len(t[0][0]) + len(t[0][1]), t[0])):
        left = " ".join(g.labels[b] for b in u) or "1"
        right = "∧".join(g.labels[b] for b in w) or "1"
        parts.append(f"{fmt_rational(c)} {left}⊗{right}")
    return " + ".join(parts)
