from typing import Optional
import logging

from src.catalog.assemble import assemble_supersymmetry_algebra, even_algebra_from_actions
from src.catalog.entry import CatalogEntry
from src.clifford.forms import invariant_bilinear_forms, spinor_space
from src.clifford.gamma import build_gamma
from src.clifford.signature import Signature
from src.clifford.spin import spin_algebra, spin_label
from src.exactla.errors import CatalogError
from src.exactla.rational import qeye, qzeros
from src.liesuper.algebra import general_linear
from src.liesuper.decomposition import ReductiveDecomposition
from src.liesuper.forms import SuperBilinearForm

logger = logging.getLogger(__name__)


def gamma_choices(sig: Signature) -> int:
    return len(invariant_bilinear_forms(build_gamma(sig), "vector", "symmetric"))


def normalized_gamma(sig: Signature, choice: int = 0) -> SuperBilinearForm:
    """choice-th symmetric equivariant S⊗S → ℝ^{r,s} form, scaled so its first nonzero coefficient is 1."""
    rep = build_gamma(sig)
    forms = invariant_bilinear_forms(rep, "vector", "symmetric")
    if not forms:
        raise CatalogError(f"no symmetric equivariant vector-valued spinor form in signature {sig}")
    if not 0 <= choice < len(forms):
        raise CatalogError(f"gamma choice {choice} outside the {len(forms)} available forms for {sig}")
    form = forms[choice]
    first = next(x for x in form.coefficients.flatten() if x != 0)
    return form.scaled(1 / first)


def build_poincare(sig: Signature, gamma_choice: Optional[int] = 0) -> CatalogEntry:
    """so(r,s) + ℝ^{r,s} + S with [A,s] = Δ(A)s, [ℝ^{r,s},S] = 0 and [s,t] = Γ(s,t).

    gamma_choice None gives Γ = 0, the odd-commutative extension.
    """
    rep = build_gamma(sig)
    sp = spin_algebra(rep)
    n = rep.n
    h_labels = [spin_label(i, j, n) for i, j in sp.pairs]
    m0_labels = [f"e{i}" for i in range(n)]
    g0 = even_algebra_from_actions(h_labels, sp.vector_action, m0_labels, {})
    gamma = normalized_gamma(sig, gamma_choice) if gamma_choice is not None else None
    C = [qzeros(rep.spin_dim, rep.spin_dim) for _ in range(n)]
    a = assemble_supersymmetry_algebra(g0, h_labels, m0_labels, rep, qeye(n), C, gamma,
                                       spinor_space(rep).labels, lift=sp.generators)
    name = f"poincare-{sig.r}-{sig.s}"
    provenance = (f"Poincaré superalgebra in signature {sig}: Mij act on e by vi∧vj and on spinors by ½γiγj; "
                  f"translations commute with everything; "
                  + (f"[s,t] is the symmetric equivariant form number {gamma_choice} normalized to a leading 1"
                     if gamma is not None else "[s,t] = 0"))
    if sig == Signature(1, 2):
        provenance += "; e0,e1,e2 correspond to the standard basis of (sl(2,R), det)"
    logger.info(f"built {name}: {a.algebra.space.sdim_str()}")
    return CatalogEntry(name, a.algebra, a.decomposition, a, None, provenance)


def build_general_linear(m: int, n: int) -> CatalogEntry:
    """gl(m|n) with h its even part and m its odd part."""
    g = general_linear(m, n)
    d = ReductiveDecomposition(g, tuple(g.even_indices()), tuple(g.odd_indices()))
    return CatalogEntry(f"gl-{m}-{n}", g, d, None, None,
                        f"gl({m}|{n}) on elementary matrices, even block first")
