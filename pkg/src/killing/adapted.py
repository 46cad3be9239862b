from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.clifford.gamma import CliffordRep
from src.clifford.spin import SpinLieAlgebra, spin_algebra, xi_star, xi_star_inv
from src.connection.curvature import axpy_operator, saturate_holonomy, sparse_operator, supercommutator
from src.connection.nomizu import supersymmetry_nomizu
from src.exactla.errors import CatalogError, NotInSpanError, ParityError, ShapeError
from src.exactla.graded import GradedSpace
from src.exactla.rational import as_qmatrix, fmt_rational, is_zero, qzeros
from src.exactla.reports import CheckReport
from src.exactla.solve import inverse, kernel, solve_many
from src.liesuper.algebra import LieSuperalgebra, Sparse, check_super_jacobi
from src.liesuper.decomposition import ReductiveDecomposition
from src.liesuper.forms import SuperBilinearForm, check_equivariance, qtensor

logger = logging.getLogger(__name__)


@dataclass
class AdaptedSupersymmetryAlgebra:
    """g = (h + m0) + m1 with m1 the spin module of m0 and h acting on m1 through the spin lift.

    `frame` holds the m0 basis (in decomposition order) as columns in orthonormal coordinates of
    `rep`; `spinor_indices[a]` is the algebra index of the spinor basis vector s_a.
    """
    decomposition: ReductiveDecomposition
    rep: CliffordRep
    frame: np.ndarray
    spinor_indices: Tuple[int, ...]
    lift: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        g = self.algebra
        d = self.decomposition
        odd_h = [g.labels[i] for i in d.h_indices if g.parities[i]]
        if odd_h:
            raise ShapeError(f"adapted algebras have an even isotropy algebra, found odd {odd_h}")
        self.spinor_indices = tuple(self.spinor_indices)
        if sorted(self.spinor_indices) != g.odd_indices() or len(self.spinor_indices) != self.rep.spin_dim:
            raise ShapeError(f"odd part of dimension {len(g.odd_indices())} is not the spin module "
                             f"of dimension {self.rep.spin_dim}")
        self.frame = as_qmatrix(self.frame)
        if self.frame.shape != (self.rep.n, len(self.m0_indices)):
            raise ShapeError(f"frame of shape {self.frame.shape} for m0 of dimension {len(self.m0_indices)} "
                             f"and signature {self.rep.signature}")
        self._frame_inv = inverse(self.frame)
        self._sp = spin_algebra(self.rep)
        if not self.lift:
            self.lift = [xi_star_inv(self._sp, self.so_image(i)) for i in d.h_indices]

    @property
    def algebra(self) -> LieSuperalgebra:
        return self.decomposition.algebra

    @property
    def spin(self) -> SpinLieAlgebra:
        return self._sp

    @property
    def m0_indices(self) -> List[int]:
        g = self.algebra
        return [i for i in self.decomposition.m_indices if g.parities[i] == 0]

    @property
    def spinor_position(self) -> Dict[int, int]:
        return {i: a for a, i in enumerate(self.spinor_indices)}

    def m0_space(self) -> GradedSpace:
        return GradedSpace.even([self.algebra.labels[i] for i in self.m0_indices])

    def spinor_space(self) -> GradedSpace:
        return GradedSpace.even([self.algebra.labels[i] for i in self.spinor_indices])

    def ad_on_m0(self, i: int) -> np.ndarray:
        m0 = self.m0_indices
        pos = {k: a for a, k in enumerate(m0)}
        out = qzeros(len(m0), len(m0))
        for col, a in enumerate(m0):
            for k, c in self.algebra.structure(i, a).items():
                out[pos[k], col] = c
        return out

    def so_image(self, i: int) -> np.ndarray:
        """ad(b_i)|m0 in orthonormal coordinates."""
        return self.frame.dot(self.ad_on_m0(i)).dot(self._frame_inv)

    def on_spinors(self, i: int) -> np.ndarray:
        """Matrix of ad(b_i) on m1 in the spinor basis."""
        pos = self.spinor_position
        n = len(self.spinor_indices)
        out = qzeros(n, n)
        for col, s in enumerate(self.spinor_indices):
            for k, c in self.algebra.structure(i, s).items():
                if k in pos:
                    out[pos[k], col] = c
        return out

    def C(self, k: int) -> np.ndarray:
        """C_X on spinors for the k-th m0 basis vector X."""
        return self.on_spinors(self.m0_indices[k])

    def gamma(self) -> SuperBilinearForm:
        """m0-valued projection of the odd-odd bracket."""
        m0 = self.m0_indices
        pos = {k: a for a, k in enumerate(m0)}
        n = len(self.spinor_indices)
        coeffs = qtensor((len(m0), n, n))
        for a, s in enumerate(self.spinor_indices):
            for b, t in enumerate(self.spinor_indices):
                for k, c in self.algebra.structure(s, t).items():
                    if k in pos:
                        coeffs[pos[k], a, b] = c
        sp = self.spinor_space()
        return SuperBilinearForm(sp, sp, self.m0_space(), coeffs)


def check_adapted(a: AdaptedSupersymmetryAlgebra, jacobi: bool = True) -> CheckReport:
    """Spin-lift equation on m1, ξ⁎ equation on m0, symmetric equivariant Γ and super-Jacobi."""
    g = a.algebra
    report = CheckReport("adapted")
    lift = CheckReport("lift")
    xi = CheckReport("xi-star")
    for n, i in enumerate(a.decomposition.h_indices):
        lift.record(is_zero(a.on_spinors(i) - a.lift[n]), {"h": g.labels[i]})
        try:
            ok = is_zero(xi_star(a.spin, a.lift[n]) - a.so_image(i))
        except NotInSpanError:
            ok = False
        xi.record(ok, {"h": g.labels[i]})
    report.merge(lift)
    report.merge(xi)
    gamma = a.gamma()
    sym = CheckReport("gamma-symmetric")
    sym.record(gamma.has_symmetry("symmetric"), {})
    report.merge(sym)
    h = a.decomposition.h_indices
    report.merge(check_equivariance(gamma, a.lift, a.lift, [a.ad_on_m0(i) for i in h],
                                    labels=[g.labels[i] for i in h]), "gamma-equivariance")
    if jacobi:
        report.merge(check_super_jacobi(g, sorted_triples=True))
    logger.info(f"adapted check: passed={report.passed} ({report.checked} checks)")
    return report


##Killing superalgebra at the origin
def _homogeneous(g: LieSuperalgebra, x, want: int, what: str) -> Sparse:
    sparse = dict(x) if isinstance(x, dict) else {i: v for i, v in enumerate(x) if v != 0}
    p = g.parity_of(sparse)
    if p is not None and p != want:
        raise ParityError(f"{what} must be {'odd' if want else 'even'}")
    return sparse


def _spinor_action(a: AdaptedSupersymmetryAlgebra) -> Dict[int, np.ndarray]:
    """Operator on m1 for each even basis index: the spin lift on h, C_X on m0."""
    out = {i: a.lift[n] for n, i in enumerate(a.decomposition.h_indices)}
    out.update({x: a.C(k) for k, x in enumerate(a.m0_indices)})
    return out


def kosmann_bracket(a: AdaptedSupersymmetryAlgebra, x, s) -> Sparse:
    """Value at o of the Kosmann derivative of ψˢ along the Killing vector of x.

    −Δ(ad~x)s on the isotropy part of x and −C_X s on its m0 part.
    """
    g = a.algebra
    xs = _homogeneous(g, x, 0, "x")
    ss = _homogeneous(g, s, 1, "s")
    pos = a.spinor_position
    vec = np.empty(len(pos), dtype=object)
    vec.fill(Fraction(0))
    for k, v in ss.items():
        vec[pos[k]] += v
    action = _spinor_action(a)
    out = np.empty(len(pos), dtype=object)
    out.fill(Fraction(0))
    for i, c in xs.items():
        out = out - action[i].dot(vec) * c
    return {a.spinor_indices[n]: v for n, v in enumerate(out) if v != 0}


def dirac_bracket(a: AdaptedSupersymmetryAlgebra, s, t) -> Sparse:
    """−Γ(s,t): minus the m0-projection of the odd-odd bracket."""
    g = a.algebra
    ss = _homogeneous(g, s, 1, "s")
    ts = _homogeneous(g, t, 1, "t")
    m0 = set(a.m0_indices)
    return {k: -v for k, v in g.bracket_sparse(ss, ts).items() if k in m0}


def derived_isotropy_part(g0: LieSuperalgebra, h: Sequence[int], m0: Sequence[int], C: Sequence[np.ndarray],
                          gamma: np.ndarray) -> Dict[Tuple[int, int], np.ndarray]:
    """h-component H(s_a,s_b) of the odd-odd bracket, from ad_H x = [x,Γ]_m0 − Γ(C_x s,t) − Γ(s,C_x t).

    Only the h-m0 and m0-m0 brackets of g0 are read.
    """
    n0 = len(m0)
    pos0 = {k: n for n, k in enumerate(m0)}
    size = gamma.shape[1]
    ##columns: ad_{h_k}|m0 flattened
    A = qzeros(n0 * n0, len(h))
    for col, i in enumerate(h):
        for b, x in enumerate(m0):
            for k, c in g0.structure(i, x).items():
                A[pos0[k] * n0 + b, col] = c
    ##twisted[x][k][a,b] = Γ_k(C_x s_a, s_b) + Γ_k(s_a, C_x s_b)
    twisted = [[C[x].T.dot(gamma[k]) + gamma[k].dot(C[x]) for k in range(n0)] for x in range(n0)]
    brackets = [[{pos0[c]: v for c, v in g0.structure(m0[x], m0[k]).items() if c in pos0}
                 for k in range(n0)] for x in range(n0)]
    pairs = [(a, b) for a in range(size) for b in range(a, size)]
    rhs = []
    for a, b in pairs:
        vec = [Fraction(0)] * (n0 * n0)
        for x in range(n0):
            for k in range(n0):
                gk = gamma[k][a, b]
                if gk != 0:
                    for c, v in brackets[x][k].items():
                        vec[c * n0 + x] += gk * v
                t = twisted[x][k][a, b]
                if t != 0:
                    vec[k * n0 + x] -= t
        rhs.append(vec)
    try:
        sols = solve_many(A, rhs)
    except NotInSpanError:
        raise CatalogError("odd-odd bracket has no isotropy part compatible with the even-odd-odd identity") from None
    logger.info(f"isotropy part of the odd-odd bracket: {len(pairs)} spinor pairs, {len(h)} unknowns each")
    return {pair: sol for pair, sol in zip(pairs, sols)}


def transported_algebra(a: AdaptedSupersymmetryAlgebra) -> LieSuperalgebra:
    """Brackets of the Killing fields φ̂₀(x), ψˢ under the identity correspondence.

    Even-even brackets are the negated even table. Even-odd brackets are Kosmann derivatives, built
    from the spin lift and C. Odd-odd brackets are −(Γ + H) with H solved again from Γ, C and the
    even table. Raises CatalogError when no isotropy part fits.
    """
    g = a.algebra
    d = a.decomposition
    m0 = a.m0_indices
    spinors = a.spinor_indices
    gamma = a.gamma().coefficients
    C = [a.C(k) for k in range(len(m0))]
    H = derived_isotropy_part(g, d.h_indices, m0, C, gamma)
    action = _spinor_action(a)
    table = {}
    for i in g.even_indices():
        for j in g.even_indices():
            if j >= i and g.structure(i, j):
                table[(i, j)] = {k: -v for k, v in g.structure(i, j).items()}
        for b, s in enumerate(spinors):
            res = {spinors[c]: -v for c, v in enumerate(action[i][:, b]) if v != 0}
            if res:
                table[(min(i, s), max(i, s))] = res if i < s else {k: -v for k, v in res.items()}
    for x, s in enumerate(spinors):
        for y in range(x, len(spinors)):
            res = {m0[k]: -gamma[k][x, y] for k in range(len(m0)) if gamma[k][x, y] != 0}
            res.update({i: -v for i, v in zip(d.h_indices, H[(x, y)]) if v != 0})
            if res:
                table[(min(s, spinors[y]), max(s, spinors[y]))] = res
    return LieSuperalgebra(g.space, table)


def killing_superalgebra_check(a: AdaptedSupersymmetryAlgebra) -> CheckReport:
    g = a.algebra
    report = CheckReport("killing-superalgebra")
    try:
        t = transported_algebra(a)
    except CatalogError as exc:
        report.record(False, {"transport": str(exc)})
        return report
    negated = CheckReport("negated-table")
    for i in range(g.dim):
        for j in range(g.dim):
            want = {k: -v for k, v in g.structure(i, j).items()}
            negated.record(t.structure(i, j) == want, {"pair": [g.labels[i], g.labels[j]],
                                                        "transported": g.describe(t.structure(i, j))})
    report.merge(negated)
    dirac = CheckReport("dirac-current")
    m0 = set(a.m0_indices)
    for s in a.spinor_indices:
        for u in a.spinor_indices:
            if u < s:
                continue
            got = dirac_bracket(a, {s: Fraction(1)}, {u: Fraction(1)})
            want = {k: v for k, v in t.structure(s, u).items() if k in m0}
            dirac.record(got == want, {"pair": [g.labels[s], g.labels[u]]})
    report.merge(dirac)
    report.merge(check_super_jacobi(t, sorted_triples=True), "transported-jacobi")
    return report


def spinor_connection_curvature(a: AdaptedSupersymmetryAlgebra) -> CheckReport:
    """R(A,B)|m1 = [C_A, C_B] − Δ(ad~[A,B]) over m0 pairs; passes when identically zero.

    Raises ShapeError unless [m0,m0] lies in h.
    """
    g = a.algebra
    d = a.decomposition
    m0 = a.m0_indices
    hpos = {k: n for n, k in enumerate(d.h_indices)}
    for x in m0:
        for y in m0:
            stray = [g.labels[k] for k in g.structure(x, y) if k not in hpos]
            if stray:
                raise ShapeError(f"[{g.labels[x]},{g.labels[y]}] has m0 components {stray}; "
                                 f"the spinor curvature needs [m0,m0] in h")
    C = [sparse_operator(a.C(k)) for k in range(len(m0))]
    lift = [sparse_operator(m) for m in a.lift]
    report = CheckReport("spinor-flatness")
    nonzero = {}
    for k, x in enumerate(m0):
        for l in range(k + 1, len(m0)):
            y = m0[l]
            r = supercommutator(C[k], C[l], 0, 0)
            for c, v in g.structure(x, y).items():
                axpy_operator(r, lift[hpos[c]], -v)
            if r:
                nonzero[f"{g.labels[x]},{g.labels[y]}"] = sum(len(row) for row in r.values())
            report.record(not r, {"pair": [g.labels[x], g.labels[y]]})
    report.details["nonzero_entries"] = nonzero
    logger.info(f"spinor connection: {report.failures} curved pairs of {report.checked}")
    return report


def supersymmetry_cross_check(a: AdaptedSupersymmetryAlgebra) -> CheckReport:
    """The supersymmetry Nomizu map restricted to m1 reproduces C."""
    n = supersymmetry_nomizu(a.decomposition)
    d = a.decomposition
    pos = d.m_position
    sp = [pos[i] for i in a.spinor_indices]
    report = CheckReport("supersymmetry-connection")
    for k, x in enumerate(a.m0_indices):
        block = n.operator(pos[x])[np.ix_(sp, sp)]
        report.record(is_zero(block - a.C(k)), {"X": a.algebra.labels[x]})
    return report


def killing_spinor_jets(a: AdaptedSupersymmetryAlgebra, s: int, order: int = 4,
                        directions: Optional[Sequence[int]] = None) -> Dict[str, List[Dict[str, str]]]:
    """Taylor data of ψˢ = Ad_{g⁻¹}s along exp(t·x): coefficients (−1)^n/n!·ad_x^n s for n ≤ order."""
    g = a.algebra
    if g.parities[s] != 1:
        raise ParityError(f"{g.labels[s]} is not odd")
    directions = a.m0_indices if directions is None else list(directions)
    out = {}
    for x in directions:
        current: Sparse = {s: Fraction(1)}
        factorial = 1
        series = []
        for n in range(order + 1):
            if n:
                factorial *= n
                current = g.bracket_sparse({x: Fraction(1)}, current)
            coeff = Fraction((-1) ** n, factorial)
            series.append(g.describe({k: v * coeff for k, v in current.items()}))
        out[g.labels[x]] = series
    return out


def killing_spinor_space(a: AdaptedSupersymmetryAlgebra) -> List[np.ndarray]:
    """Spinors annihilated by the holonomy of C on m1 (curvature operators saturated under C_X)."""
    g = a.algebra
    d = a.decomposition
    m0 = a.m0_indices
    pos0 = {k: n for n, k in enumerate(m0)}
    hpos = {k: n for n, k in enumerate(d.h_indices)}
    C = [sparse_operator(a.C(k)) for k in range(len(m0))]
    lift = [sparse_operator(m) for m in a.lift]
    curvatures = []
    for k, x in enumerate(m0):
        for l in range(k + 1, len(m0)):
            y = m0[l]
            r = supercommutator(C[k], C[l], 0, 0)
            for c, v in g.structure(x, y).items():
                axpy_operator(r, C[pos0[c]] if c in pos0 else lift[hpos[c]], -v)
            curvatures.append((r, 0, {"curvature": [g.labels[x], g.labels[y]]}))
    labels = [g.labels[i] for i in a.spinor_indices]
    generators = [(C[k], 0, g.labels[x]) for k, x in enumerate(m0)]
    hol = saturate_holonomy(curvatures, generators, len(labels), labels)
    if not hol.operators:
        size = len(labels)
        return [np.array([Fraction(int(i == j)) for i in range(size)], dtype=object) for j in range(size)]
    stacked = np.vstack(hol.operators)
    return kernel(stacked)


def adapted_to_dict(a: AdaptedSupersymmetryAlgebra) -> dict:
    g = a.algebra
    return {"signature": [a.rep.signature.r, a.rep.signature.s],
            "h": [g.labels[i] for i in a.decomposition.h_indices],
            "m0": [g.labels[i] for i in a.m0_indices],
            "spinors": [g.labels[i] for i in a.spinor_indices],
            "frame": [[fmt_rational(x) for x in row] for row in a.frame]}
