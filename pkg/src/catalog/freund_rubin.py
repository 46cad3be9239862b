from fractions import Fraction
from typing import Optional
import logging

from src.catalog.assemble import (assemble_supersymmetry_algebra, calibrated_assembly, even_algebra_from_actions,
                                  flat_m0_brackets)
from src.catalog.entry import CatalogEntry
from src.catalog.poincare import gamma_choices, normalized_gamma
from src.clifford.gamma import build_gamma
from src.clifford.spin import spin_algebra, spin_label
from src.exactla.graded import GradedSpace
from src.exactla.rational import Q, qeye
from src.killing.flux import SUPERGRAVITY, Conventions, FluxForm, calibrate_flux, supergravity_connection_term

logger = logging.getLogger(__name__)

##anti-de Sitter directions of the orthonormal frame for each product
SPLITS = {"4-7": tuple(range(0, 4)), "7-4": tuple(range(0, 7))}
FLUX_SCALE = Fraction(3)


def build_freund_rubin(which: str = "4-7", sphere_coefficient: Optional[object] = None) -> CatalogEntry:
    """AdS4 x S7 (flux on the AdS factor) or AdS7 x S4 (flux on the sphere), F = 3·dvol.

    [X,Q] comes from the supergravity connection term under the calibrated conventions; for 4-7 a
    sphere coefficient c replaces the sphere directions by [w,Q] = c I w·Q with I = e0e1e2e3, and the
    attached calibration then scores that table. The m0-m0 brackets are the isotropy elements whose
    spin lift is [C_X, C_Y].
    """
    if which not in SPLITS:
        raise ValueError(f"unknown Freund-Rubin product {which!r}; expected one of {sorted(SPLITS)}")
    if which == "7-4" and sphere_coefficient is not None:
        raise ValueError("the sphere coefficient is a parameter of the 4-7 product only")
    rep = build_gamma(SUPERGRAVITY)
    sp = spin_algebra(rep)
    n = rep.n
    ads = set(SPLITS[which])
    keep = [k for k, (i, j) in enumerate(sp.pairs) if (i in ads) == (j in ads)]
    h_labels = [spin_label(*sp.pairs[k], n) for k in keep]
    actions = [sp.vector_action[k] for k in keep]
    lift = [sp.generators[k] for k in keep]
    m0_labels = [f"e{i}" for i in range(n)]
    flux_block = tuple(sorted(ads)) if which == "4-7" else tuple(i for i in range(n) if i not in ads)
    flux = FluxForm(GradedSpace.even(m0_labels), {flux_block: FLUX_SCALE})
    I = rep.product(sorted(ads))

    def assemble(conv: Conventions, form: int, coefficient=None):
        C = [supergravity_connection_term(rep, flux, [1 if j == k else 0 for j in range(n)], conv) for k in range(n)]
        if coefficient is not None:
            C = [C[i] if i in ads else I.dot(rep.gammas[i]) * coefficient for i in range(n)]
        brackets = flat_m0_brackets(lift, C, h_labels, m0_labels)
        g0 = even_algebra_from_actions(h_labels, actions, m0_labels, brackets)
        return assemble_supersymmetry_algebra(g0, h_labels, m0_labels, rep, qeye(n), C,
                                              normalized_gamma(SUPERGRAVITY, form),
                                              [f"Q{k}" for k in range(rep.spin_dim)], lift=lift)

    a, calibration, conv, form = calibrated_assembly(assemble, flux, range(gamma_choices(SUPERGRAVITY)))
    c = None if sphere_coefficient is None else Q(sphere_coefficient)
    if c is not None:
        a = assemble(conv, form, c)
        calibration = calibrate_flux(a, flux)
    provenance = (f"Freund-Rubin AdS x S, product {which}: anti-de Sitter directions e{min(ads)}..e{max(ads)}, "
                  f"F = 3 dvol on e{flux_block[0]}..e{flux_block[-1]}; "
                  f"[X,Q] from the supergravity connection term under {conv.name}, gamma form {form}; "
                  + (f"sphere directions replaced by [w,Q] = {c} I w.Q with I = e0e1e2e3; " if c is not None else "")
                  + "[X,Y] solved from [C_X, C_Y] = lift([X,Y]); odd-odd bracket: Dirac current plus the derived "
                  "isotropy part")
    name = f"freund-rubin-{which}"
    logger.info(f"built {name}: {a.algebra.space.sdim_str()}")
    entry = CatalogEntry(name, a.algebra, a.decomposition, a, flux, provenance)
    entry.reports["calibration"] = calibration
    return entry
