from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np
from tqdm import tqdm

from src.exactla.graded import GradedSpace, TensorElement
from src.exactla.rational import Q, ZERO, as_qmatrix, fmt_rational, qeye, qzeros
from src.exactla.reports import CheckReport
from src.exactla.solve import EchelonBasis, inverse, joint_kernel, rank
from src.liesuper.algebra import LieSuperalgebra, Sparse
from src.liesuper.decomposition import ReductiveDecomposition
from src.connection.nomizu import NomizuMap

logger = logging.getLogger(__name__)

##sparse operators on m: {row: {col: value}}
Op = Dict[int, Dict[int, Fraction]]


def sparse_operator(m: np.ndarray) -> Op:
    out: Op = {}
    for (i, j), x in np.ndenumerate(m):
        if x != 0:
            out.setdefault(i, {})[j] = x
    return out


def dense_operator(op: Op, n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i, row in op.items():
        for j, x in row.items():
            out[i, j] = x
    return out


def axpy_operator(into: Op, op: Op, scale=1) -> Op:
    for i, row in op.items():
        target = into.setdefault(i, {})
        for j, x in row.items():
            y = target.get(j, ZERO) + scale * x
            if y:
                target[j] = y
            else:
                target.pop(j, None)
        if not target:
            into.pop(i, None)
    return into


def multiply_operators(a: Op, b: Op) -> Op:
    out: Op = {}
    for i, row in a.items():
        acc: Dict[int, Fraction] = {}
        for k, x in row.items():
            for j, y in b.get(k, {}).items():
                acc[j] = acc.get(j, ZERO) + x * y
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


def supercommutator(a: Op, b: Op, pa: int, pb: int) -> Op:
    out = multiply_operators(a, b)
    return axpy_operator(out, multiply_operators(b, a), 1 if pa and pb else -1)


def flatten_operator(op: Op, n: int) -> Dict[int, Fraction]:
    return {i * n + j: x for i, row in op.items() for j, x in row.items()}


class _Operators:
    """Sparse L(A) and ad(b)|m for one Nomizu map."""

    def __init__(self, n: NomizuMap):
        self.map = n
        self.d = n.decomposition
        self.size = n.dim
        self.p = n.parities
        self.L = [sparse_operator(op) for op in n.operators]
        self._ad: Dict[int, Op] = {}

    def ad(self, i: int) -> Op:
        if i not in self._ad:
            self._ad[i] = sparse_operator(self.d.ad_on_m(i))
        return self._ad[i]

    def L_of(self, x: Dict[int, Fraction]) -> Op:
        out: Op = {}
        for c, v in x.items():
            axpy_operator(out, self.L[c], v)
        return out

    def ad_of(self, x: Sparse) -> Op:
        out: Op = {}
        for i, v in x.items():
            axpy_operator(out, self.ad(i), v)
        return out

    def curvature(self, a: int, b: int) -> Op:
        """R(A,B) = [L(A),L(B)] − L([A,B]_m) − ad([A,B]_h)|m."""
        out = supercommutator(self.L[a], self.L[b], self.p[a], self.p[b])
        axpy_operator(out, self.L_of(self.d.bracket_m(a, b)), -1)
        axpy_operator(out, self.ad_of(self.d.bracket_h(a, b)), -1)
        return out

    def torsion(self, a: int, b: int) -> Dict[int, Fraction]:
        """T(A,B) = L(A)B − (−1)^{|A||B|} L(B)A − [A,B]_m."""
        sign = -1 if self.p[a] and self.p[b] else 1
        out: Dict[int, Fraction] = {}
        for c, row in self.L[a].items():
            if b in row:
                out[c] = out.get(c, ZERO) + row[b]
        for c, row in self.L[b].items():
            if a in row:
                out[c] = out.get(c, ZERO) - sign * row[a]
        for c, v in self.d.bracket_m(a, b).items():
            out[c] = out.get(c, ZERO) - v
        return {c: v for c, v in out.items() if v}


def curvature_at_o(n: NomizuMap, progress: bool = False) -> Dict[Tuple[int, int], np.ndarray]:
    """Nonzero curvature operators R_o(A,B) on m, keyed by m-positions."""
    ops = _Operators(n)
    out = {}
    for a in tqdm(range(n.dim), desc="curvature", disable=not progress, leave=False):
        for b in range(n.dim):
            r = ops.curvature(a, b)
            if r:
                out[(a, b)] = dense_operator(r, n.dim)
    return out


def torsion_at_o(n: NomizuMap) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    ops = _Operators(n)
    out = {}
    for a in range(n.dim):
        for b in range(n.dim):
            t = ops.torsion(a, b)
            if t:
                out[(a, b)] = t
    return out


def extended_morphism_defect(n: NomizuMap) -> CheckReport:
    """Λ = ad|m on h and L on m; records Λ([x,y]) − [Λx, Λy] = 0 over every basis pair of g."""
    ops = _Operators(n)
    d = n.decomposition
    g = d.algebra
    pos = d.m_position

    def lam(x: Sparse) -> Op:
        out: Op = {}
        for i, v in x.items():
            axpy_operator(out, ops.L[pos[i]] if i in pos else ops.ad(i), v)
        return out

    report = CheckReport("extended-morphism")
    for i in range(g.dim):
        for j in range(i, g.dim):
            lhs = lam(g.structure(i, j))
            axpy_operator(lhs, supercommutator(lam({i: Fraction(1)}), lam({j: Fraction(1)}),
                                       g.parities[i], g.parities[j]), -1)
            report.record(not lhs, {"pair": [g.labels[i], g.labels[j]]})
    return report


def is_flat(n: NomizuMap) -> CheckReport:
    """Flat iff R_o vanishes; the morphism property of the extended map must agree."""
    ops = _Operators(n)
    labels = n.decomposition.m_space.labels
    report = CheckReport("flat")
    for a in range(n.dim):
        for b in range(a, n.dim):
            r = ops.curvature(a, b)
            report.record(not r, {"pair": [labels[a], labels[b]],
                                  "curvature": {f"{labels[i]}<-{labels[j]}": fmt_rational(x)
                                                for i, row in sorted(r.items()) for j, x in sorted(row.items())}})
    morphism = extended_morphism_defect(n)
    report.details["curvature_zero"] = report.passed
    report.details["morphism"] = morphism.passed
    report.details["criteria_agree"] = report.passed == morphism.passed
    if report.passed != morphism.passed:
        logger.warning(f"flatness criteria disagree: curvature {report.passed}, morphism {morphism.passed} "
                       f"(first defect {morphism.first_failure})")
    return report


@dataclass
class HolonomyAlgebra:
    """Operators on m spanning the infinitesimal holonomy, with their generation history."""
    size: int
    labels: Tuple[str, ...]
    operators: List[np.ndarray] = field(default_factory=list)
    parities: List[int] = field(default_factory=list)
    depth: List[int] = field(default_factory=list)
    origin: List[dict] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.operators)

    def to_dict(self) -> dict:
        ops = []
        for op, p, dep, org in zip(self.operators, self.parities, self.depth, self.origin):
            entries = {f"{self.labels[i]}<-{self.labels[j]}": fmt_rational(x)
                       for (i, j), x in np.ndenumerate(op) if x != 0}
            ops.append({"depth": dep, "parity": p, "origin": org, "entries": entries})
        return {"dim": self.dim, "operators": ops}


def saturate_holonomy(curvatures: Sequence[Tuple[Op, int, dict]], generators: Sequence[Tuple[Op, int, str]],
                      size: int, labels: Sequence[str], max_depth: Optional[int] = None,
                      progress: bool = False) -> HolonomyAlgebra:
    """Span of the given curvature operators, saturated breadth-first under [X, ·] for each generator X."""
    out = HolonomyAlgebra(size, tuple(labels))
    echelon = EchelonBasis()
    level: List[Tuple[Op, int]] = []
    for r, p, origin in curvatures:
        if r and echelon.add(flatten_operator(r, size)):
            level.append((r, p))
            out.operators.append(dense_operator(r, size))
            out.parities.append(p)
            out.depth.append(0)
            out.origin.append(origin)
    depth = 0
    bar = tqdm(desc="holonomy", disable=not progress, leave=False)
    while level and len(echelon) < size * size and (max_depth is None or depth < max_depth):
        depth += 1
        parents = len(out.operators) - len(level)
        nxt = []
        for k, (x, px) in enumerate(level):
            for gen, pg, name in generators:
                y = supercommutator(gen, x, pg, px)
                if y and echelon.add(flatten_operator(y, size)):
                    p = (pg + px) % 2
                    nxt.append((y, p))
                    out.operators.append(dense_operator(y, size))
                    out.parities.append(p)
                    out.depth.append(depth)
                    out.origin.append({"L": name, "of": parents + k})
        level = nxt
        bar.update(1)
    bar.close()
    logger.info(f"holonomy: dimension {out.dim} after depth {depth}")
    return out


def infinitesimal_holonomy(n: NomizuMap, max_depth: Optional[int] = None,
                           progress: bool = False) -> HolonomyAlgebra:
    """Span of the curvature operators, saturated breadth-first under [L(A), ·]."""
    ops = _Operators(n)
    labels = n.decomposition.m_space.labels
    curvatures = [(ops.curvature(a, b), (ops.p[a] + ops.p[b]) % 2, {"curvature": [labels[a], labels[b]]})
                  for a in range(n.dim) for b in range(a, n.dim)]
    generators = [(ops.L[a], ops.p[a], labels[a]) for a in range(n.dim)]
    return saturate_holonomy(curvatures, generators, n.dim, labels, max_depth, progress)


def parallel_tensor_space(n: NomizuMap, contravariant: int, covariant: int, parity: Optional[int] = None,
                          holonomy: Optional[HolonomyAlgebra] = None) -> List[TensorElement]:
    """Tensors on m of type (r, s) annihilated by the infinitesimal holonomy."""
    if holonomy is None:
        holonomy = infinitesimal_holonomy(n)
    m = n.decomposition.m_space
    factors = (m,) * (contravariant + covariant)
    dual = (False,) * contravariant + (True,) * covariant
    generators = [[op] * len(factors) for op in holonomy.operators]
    basis = joint_kernel(factors, generators, dual, list(holonomy.parities), parity)
    return [TensorElement(factors, dual, vec) for vec in basis]


@dataclass
class ConnectionReport:
    map: NomizuMap
    curvature: Dict[Tuple[int, int], np.ndarray]
    torsion: Dict[Tuple[int, int], Dict[int, Fraction]]
    flat: CheckReport
    holonomy: Optional[HolonomyAlgebra] = None

    def curvature_dict(self) -> dict:
        labels = self.map.decomposition.m_space.labels
        out = {}
        for (a, b), op in sorted(self.curvature.items()):
            out[f"{labels[a]},{labels[b]}"] = {f"{labels[i]}<-{labels[j]}": fmt_rational(x)
                                               for (i, j), x in np.ndenumerate(op) if x != 0}
        return out

    def torsion_dict(self) -> dict:
        labels = self.map.decomposition.m_space.labels
        return {f"{labels[a]},{labels[b]}": {labels[c]: fmt_rational(v) for c, v in sorted(t.items())}
                for (a, b), t in sorted(self.torsion.items())}

    def to_dict(self) -> dict:
        out = {"connection": self.map.name, "curvature": self.curvature_dict(),
               "torsion": self.torsion_dict(), "flat": self.flat.to_dict()}
        if self.holonomy is not None:
            out["holonomy"] = self.holonomy.to_dict()
        return out


def connection_report(n: NomizuMap, holonomy: bool = True) -> ConnectionReport:
    return ConnectionReport(n, curvature_at_o(n), torsion_at_o(n), is_flat(n),
                            infinitesimal_holonomy(n) if holonomy else None)


##change of m-basis
def random_change_of_basis(d: ReductiveDecomposition, rng: Random, bound: int = 3) -> np.ndarray:
    """Invertible parity-preserving rational matrix on m, with small integer entries."""
    p = d.m_space.parities
    n = len(p)
    while True:
        P = qeye(n)
        for i in range(n):
            for j in range(n):
                if p[i] == p[j] and rng.random() < 0.5:
                    P[i, j] = Q(rng.randint(-bound, bound)) + (1 if i == j else 0)
        if rank(P) == n:
            return P


def rebase_decomposition(d: ReductiveDecomposition, P: np.ndarray) -> ReductiveDecomposition:
    """Same algebra with m-basis m'_a = Σ_b P[b,a] m_b; h is kept."""
    g = d.algebra
    P = as_qmatrix(P)
    n = g.dim
    T = qeye(n)
    m = list(d.m_indices)
    for a, ia in enumerate(m):
        for b, ib in enumerate(m):
            T[ib, ia] = P[b, a]
    T_inv = inverse(T)
    labels = tuple(f"{x}'" if i in d.m_position else x for i, x in enumerate(g.labels))
    table = {}
    for i in range(n):
        for j in range(i, n):
            x = {k: v for k, v in enumerate(T[:, i]) if v != 0}
            y = {k: v for k, v in enumerate(T[:, j]) if v != 0}
            z = np.array([ZERO] * n, dtype=object)
            for k, v in g.bracket_sparse(x, y).items():
                z[k] = v
            new = T_inv.dot(z)
            table[(i, j)] = {k: v for k, v in enumerate(new) if v != 0}
    algebra = LieSuperalgebra(GradedSpace(labels, g.parities), table)
    return ReductiveDecomposition(algebra, d.h_indices, d.m_indices)


def rebase_nomizu(n: NomizuMap, P: np.ndarray, target: ReductiveDecomposition) -> NomizuMap:
    """L'(m'_a) = P⁻¹ (Σ_b P[b,a] L(m_b)) P."""
    P = as_qmatrix(P)
    P_inv = inverse(P)
    ops = []
    for a in range(n.dim):
        acc = qzeros(n.dim, n.dim)
        for b in range(n.dim):
            if P[b, a] != 0:
                acc = acc + n.operators[b] * P[b, a]
        ops.append(P_inv.dot(acc).dot(P))
    return NomizuMap(target, ops, n.name)
