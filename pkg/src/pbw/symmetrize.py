from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Dict, Tuple
import logging

from src.exactla.rational import Q, ZERO, fmt_rational, permutation_sign
from src.pbw.enveloping import PBWAlgebra, Terms, UEAElement, add_terms
from src.pbw.exterior import ExteriorElement, Wedge

logger = logging.getLogger(__name__)

##U(g_0) ⊗ Λ(g_1): {(even PBW word, odd wedge): coefficient}
Presentation = Dict[Tuple[Tuple[int, ...], Wedge], Fraction]


def gamma_symmetrize(alg: PBWAlgebra, v: ExteriorElement) -> UEAElement:
    """a_1∧…∧a_p ↦ (1/p!) Σ_σ sgn(σ) a_σ(1)…a_σ(p), normal ordered."""
    out: Terms = {}
    for w, c in v.terms.items():
        scale = c / factorial(len(w))
        for perm in permutations(range(len(w))):
            add_terms(out, alg._normal(tuple(w[i] for i in perm)), scale * permutation_sign(perm))
    return UEAElement(alg, out)


def underline_gamma(alg: PBWAlgebra, pres: Presentation) -> UEAElement:
    """Σ u_i ⊗ v_i ↦ Σ u_i·γ(v_i)."""
    out = alg.zero()
    for (even, wedge), c in pres.items():
        part = UEAElement(alg, alg._normal(tuple(even))) * gamma_symmetrize(alg, ExteriorElement.basis(wedge))
        out = out + part.scaled(c)
    return out


def underline_gamma_inv(u: UEAElement) -> Presentation:
    """Triangular back-substitution from the top filtration degree."""
    alg = u.alg
    g = alg.g
    rest = UEAElement(alg, dict(u.terms))
    out: Presentation = {}
    while not rest.is_zero():
        top = rest.degree
        word, c = next((w, c) for w, c in rest.sorted_terms() if len(w) == top)
        even = tuple(b for b in word if not g.parities[b])
        odd = tuple(b for b in word if g.parities[b])
        key = (even, odd)
        out[key] = out.get(key, ZERO) + c
        rest = rest - underline_gamma(alg, {key: Fraction(1)}).scaled(c)
    return {k: v for k, v in out.items() if v != 0}


def presentation_to_dict(alg: PBWAlgebra, pres: Presentation) -> Dict[str, str]:
    labels = alg.g.labels
    out = {}
    for (even, wedge), c in sorted(pres.items()):
        left = " ".join(labels[b] for b in even) or "1"
        right = "∧".join(labels[b] for b in wedge) or "1"
        out[f"{left} ⊗ {right}"] = fmt_rational(c)
    return out
