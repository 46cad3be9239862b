from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple
import logging
import numpy as np

from src.clifford.gamma import CliffordRep
from src.clifford.spin import spin_algebra, xi_star_inv
from src.exactla.errors import CatalogError, NotInSpanError
from src.exactla.graded import GradedSpace
from src.exactla.rational import Q, as_qmatrix, qzeros
from src.exactla.solve import coordinates, inverse, solve_many
from src.exactla.reports import CheckReport
from src.killing.adapted import AdaptedSupersymmetryAlgebra, derived_isotropy_part
from src.killing.flux import Conventions, FluxForm, calibrate_flux, selected_choice
from src.liesuper.algebra import LieSuperalgebra, Sparse
from src.liesuper.decomposition import ReductiveDecomposition
from src.liesuper.forms import SuperBilinearForm

logger = logging.getLogger(__name__)


def even_algebra_from_actions(h_labels: Sequence[str], h_on_m0: Sequence[np.ndarray], m0_labels: Sequence[str],
                              m0_brackets: Mapping[Tuple[str, str], Mapping[str, object]]) -> LieSuperalgebra:
    """h + m0 from the matrices of ad_h on m0 (faithful) and the listed m0-m0 brackets.

    [h_i, h_j] is read off from the commutator of the action matrices.
    """
    nh = len(h_labels)
    n0 = len(m0_labels)
    mats = [as_qmatrix(a) for a in h_on_m0]
    flat = [m.flatten() for m in mats]
    space = GradedSpace.even(list(h_labels) + list(m0_labels))
    table: Dict[Tuple[int, int], Sparse] = {}
    for i in range(nh):
        for j in range(i + 1, nh):
            comm = mats[i].dot(mats[j]) - mats[j].dot(mats[i])
            if not any(x != 0 for x in comm.flatten()):
                continue
            try:
                c = coordinates(flat, comm.flatten())
            except NotInSpanError:
                raise CatalogError(f"[{h_labels[i]},{h_labels[j]}] leaves the span of the isotropy action") from None
            table[(i, j)] = {k: v for k, v in enumerate(c) if v != 0}
        for a in range(n0):
            res = {nh + b: mats[i][b, a] for b in range(n0) if mats[i][b, a] != 0}
            if res:
                table[(i, nh + a)] = res
    for (x, y), res in m0_brackets.items():
        table[(space.index(x), space.index(y))] = {space.index(k): Q(v) for k, v in res.items()}
    return LieSuperalgebra(space, table)


def lift_isotropy(rep: CliffordRep, frame: np.ndarray, h_on_m0: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Δ∘ad~ for each isotropy generator, through ξ⁎⁻¹ of its so(m0) image in orthonormal coordinates."""
    sp = spin_algebra(rep)
    P = as_qmatrix(frame)
    P_inv = inverse(P)
    return [xi_star_inv(sp, P.dot(as_qmatrix(a)).dot(P_inv)) for a in h_on_m0]


def gamma_in_frame(gamma: Optional[SuperBilinearForm], frame: np.ndarray, size: int) -> np.ndarray:
    """Components of Γ along the m0 basis; the form is given along the orthonormal vectors."""
    P_inv = inverse(as_qmatrix(frame))
    n0 = P_inv.shape[0]
    out = np.empty((n0, size, size), dtype=object)
    out.fill(Fraction(0))
    if gamma is None:
        return out
    c = gamma.coefficients
    for k in range(n0):
        for u in range(c.shape[0]):
            if P_inv[k, u] != 0:
                out[k] = out[k] + c[u] * P_inv[k, u]
    return out


def flat_m0_brackets(lift: Sequence[np.ndarray], C: Sequence[np.ndarray], h_labels: Sequence[str],
                     m0_labels: Sequence[str]) -> Dict[Tuple[str, str], Dict[str, Fraction]]:
    """[X,Y] = H in h with Δ(ad~H) = [C_X, C_Y]: the m0-m0 brackets making the spinor connection flat."""
    flat = qzeros(lift[0].size, len(lift))
    for k, m in enumerate(lift):
        flat[:, k] = as_qmatrix(m).flatten()
    out = {}
    n0 = len(m0_labels)
    pairs = [(x, y) for x in range(n0) for y in range(x + 1, n0)]
    rhs = [(C[x].dot(C[y]) - C[y].dot(C[x])).flatten() for x, y in pairs]
    try:
        sols = solve_many(flat, rhs)
    except NotInSpanError:
        raise CatalogError("[C_X, C_Y] is not in the image of the spin lift") from None
    for (x, y), sol in zip(pairs, sols):
        res = {h_labels[k]: v for k, v in enumerate(sol) if v != 0}
        if res:
            out[(m0_labels[x], m0_labels[y])] = res
    return out


def assemble_supersymmetry_algebra(g0: LieSuperalgebra, h_labels: Sequence[str], m0_labels: Sequence[str],
                                   rep: CliffordRep, frame: np.ndarray, C: Sequence[np.ndarray],
                                   gamma: Optional[SuperBilinearForm], spinor_labels: Sequence[str],
                                   lift: Optional[Sequence[np.ndarray]] = None) -> AdaptedSupersymmetryAlgebra:
    """g0 + S with h acting by the spin lift, m0 by C, and [s,t] = Γ(s,t) + H(s,t) (H derived)."""
    h = [g0.index(x) for x in h_labels]
    m0 = [g0.index(x) for x in m0_labels]
    C = [as_qmatrix(c) for c in C]
    size = rep.spin_dim
    if lift is None:
        lift = lift_isotropy(rep, frame, [_action(g0, i, m0) for i in h])
    G = gamma_in_frame(gamma, frame, size)
    H = derived_isotropy_part(g0, h, m0, C, G) if gamma is not None else {}
    n = g0.dim
    space = GradedSpace(tuple(g0.labels) + tuple(spinor_labels), tuple(g0.parities) + (1,) * size)
    table: Dict[Tuple[int, int], Sparse] = {key: dict(v) for key, v in g0.table_items()}

    for mats, idx in ((lift, h), (C, m0)):
        for m, i in zip(mats, idx):
            for b in range(size):
                res = {n + c: m[c, b] for c in range(size) if m[c, b] != 0}
                if res:
                    table[(i, n + b)] = res
    for a in range(size):
        for b in range(a, size):
            res: Sparse = {}
            for k, x in enumerate(m0):
                if G[k][a, b] != 0:
                    res[x] = G[k][a, b]
            for k, i in enumerate(h):
                v = H[(a, b)][k] if H else 0
                if v != 0:
                    res[i] = v
            if res:
                table[(n + a, n + b)] = res
    g = LieSuperalgebra(space, table)
    d = ReductiveDecomposition(g, tuple(h), tuple(m0) + tuple(range(n, n + size)))
    logger.info(f"assembled superalgebra of dimension {space.sdim_str()}")
    return AdaptedSupersymmetryAlgebra(d, rep, frame, tuple(range(n, n + size)), [as_qmatrix(m) for m in lift])


def _action(g0: LieSuperalgebra, i: int, m0: Sequence[int]) -> np.ndarray:
    pos = {k: n for n, k in enumerate(m0)}
    out = qzeros(len(m0), len(m0))
    for col, x in enumerate(m0):
        for k, c in g0.structure(i, x).items():
            out[pos[k], col] = c
    return out


def calibrated_assembly(assemble: Callable[[Conventions, int], AdaptedSupersymmetryAlgebra], flux: FluxForm,
                        forms: Sequence[int]) -> Tuple[AdaptedSupersymmetryAlgebra, CheckReport, Conventions, int]:
    """Build under the first convention and Γ choice that calibration accepts.

    When no choice closes, the default convention is kept and the report localizes the failures.
    """
    built: Dict[Tuple[Conventions, int], AdaptedSupersymmetryAlgebra] = {}

    def cached(conv: Conventions, form: int) -> AdaptedSupersymmetryAlgebra:
        if (conv, form) not in built:
            built[(conv, form)] = assemble(conv, form)
        return built[(conv, form)]

    forms = list(forms)
    report = calibrate_flux(None, flux, assemble=cached, forms=forms)
    choice = selected_choice(report)
    if choice is None:
        conv, form = Conventions(), forms[0]
        logger.warning(f"no convention closes the algebra; keeping {conv.name} form {form}")
    else:
        conv, form = choice
        logger.info(f"calibrated conventions: {conv.name} form {form}")
    return cached(conv, form), report, conv, form
