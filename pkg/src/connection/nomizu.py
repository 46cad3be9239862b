from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.exactla.errors import DegenerateFormError, DimensionMismatchError, ParityError, ShapeError
from src.exactla.rational import Q, ZERO, as_qmatrix, fmt_rational, is_zero, qzeros
from src.exactla.reports import CheckReport
from src.exactla.solve import EchelonBasis, SparseRow, inverse, kernel_of_rows, rank
from src.liesuper.decomposition import ReductiveDecomposition
from src.liesuper.forms import SuperBilinearForm
from src.liesuper.invariants import invariants_in_tensor

logger = logging.getLogger(__name__)

Key = Tuple[int, int, int]

##parity blocks of an even map m -> gl(m): (|A|, |B|, |C|) for L(A)B having a C-component
BLOCKS: Dict[Tuple[int, int, int], str] = {
    (0, 0, 0): "V->V*xV",
    (0, 1, 1): "V->S*xS",
    (1, 0, 1): "S->V*xS",
    (1, 1, 0): "S->S*xV",
}


@dataclass
class NomizuMap:
    """Even linear map L: m -> gl(m); operators[a] is the matrix of L(m_a) in the m-basis."""
    decomposition: ReductiveDecomposition
    operators: List[np.ndarray]
    name: str = ""

    def __post_init__(self):
        m = self.decomposition.m_space
        if len(self.operators) != m.dim:
            raise DimensionMismatchError(f"{len(self.operators)} operators for an m of dimension {m.dim}")
        ops = []
        for a, op in enumerate(self.operators):
            mat = as_qmatrix(op)
            if mat.shape != (m.dim, m.dim):
                raise DimensionMismatchError(f"L({m.labels[a]}) has shape {mat.shape}")
            for (c, b), x in np.ndenumerate(mat):
                if x != 0 and (m.parities[a] + m.parities[b] + m.parities[c]) % 2:
                    raise ParityError(f"L({m.labels[a]}){m.labels[b]} has a component along {m.labels[c]} "
                                      f"of the wrong parity")
            ops.append(mat)
        self.operators = ops

    @classmethod
    def zero(cls, d: ReductiveDecomposition, name: str = "zero") -> "NomizuMap":
        n = len(d.m_indices)
        return cls(d, [qzeros(n, n) for _ in range(n)], name)

    @classmethod
    def from_coefficients(cls, d: ReductiveDecomposition, coefficients: Dict[Key, Fraction],
                          name: str = "") -> "NomizuMap":
        n = len(d.m_indices)
        ops = [qzeros(n, n) for _ in range(n)]
        for (a, b, c), v in coefficients.items():
            ops[a][c, b] = Q(v)
        return cls(d, ops, name)

    @property
    def dim(self) -> int:
        return len(self.operators)

    @property
    def parities(self) -> Tuple[int, ...]:
        return self.decomposition.m_space.parities

    def operator(self, a: int) -> np.ndarray:
        return self.operators[a]

    def apply(self, a: int, b: int) -> np.ndarray:
        """L(m_a) m_b in m-coordinates."""
        return self.operators[a][:, b]

    def coefficients(self) -> Dict[Key, Fraction]:
        out = {}
        for a, op in enumerate(self.operators):
            for (c, b), x in np.ndenumerate(op):
                if x != 0:
                    out[(a, b, c)] = x
        return out

    def is_zero(self) -> bool:
        return all(is_zero(op) for op in self.operators)

    def __add__(self, other: "NomizuMap") -> "NomizuMap":
        return NomizuMap(self.decomposition, [x + y for x, y in zip(self.operators, other.operators)])

    def __sub__(self, other: "NomizuMap") -> "NomizuMap":
        return NomizuMap(self.decomposition, [x - y for x, y in zip(self.operators, other.operators)])

    def scaled(self, c) -> "NomizuMap":
        c = Q(c)
        return NomizuMap(self.decomposition, [op * c for op in self.operators], self.name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NomizuMap) or other.dim != self.dim:
            return NotImplemented
        return (self - other).is_zero()

    def to_dict(self) -> dict:
        labels = self.decomposition.m_space.labels
        entries = []
        for (a, b, c), v in sorted(self.coefficients().items()):
            entries.append({"A": labels[a], "B": labels[b], "C": labels[c], "coeff": fmt_rational(v)})
        return {"name": self.name, "m": list(labels), "entries": entries}


def _ad_columns(d: ReductiveDecomposition) -> List[Tuple[int, Dict[int, List[Tuple[int, Fraction]]]]]:
    ##(parity, {column: [(row, value)]}) of ad(b)|m for each b in h
    out = []
    g = d.algebra
    for i in d.h_indices:
        cols: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, c), x in np.ndenumerate(d.ad_on_m(i)):
            if x != 0:
                cols.setdefault(c, []).append((r, x))
        out.append((g.parities[i], cols))
    return out


def _equivariance_rows(d: ReductiveDecomposition, keys: Sequence[Key],
                       extra_generators: Sequence[np.ndarray] = ()) -> List[SparseRow]:
    """Linear equations on the coefficients c[A,B,C] of L(A)B for
    L([b,A]) = ad_b L(A) − (−1)^{|b||A|} L(A) ad_b, one per (b, A, B, C)."""
    p = d.m_space.parities
    position = {k: n for n, k in enumerate(keys)}
    equations: Dict[Tuple, SparseRow] = {}

    def add(eq, unknown, value):
        row = equations.setdefault(eq, {})
        row[position[unknown]] = row.get(position[unknown], ZERO) + value

    for g, (pb, cols) in enumerate(_ad_columns(d)):
        rows_of: Dict[int, List[Tuple[int, Fraction]]] = {}
        for c, entries in cols.items():
            for r, x in entries:
                rows_of.setdefault(r, []).append((c, x))
        for key in keys:
            a, b, c = key
            ##ad_b L(A): unknown (A, B, D) feeds (C, B) through ad[C, D]
            for r, x in cols.get(c, ()):
                add((g, a, b, r), key, x)
            ##L(A) ad_b: unknown (A, D, C) feeds (C, B) through ad[D, B]
            sign = -1 if pb and p[a] else 1
            for col, x in rows_of.get(b, ()):
                add((g, a, col, c), key, -sign * x)
            ##L([b, A]): unknown (D, B, C) feeds equation A through ad[D, A]
            for col, x in rows_of.get(a, ()):
                add((g, col, b, c), key, -x)
    for g, mat in enumerate(extra_generators, start=len(d.h_indices)):
        ##finite-order element: L(gA) g − g L(A) = 0
        mat = as_qmatrix(mat)
        n = mat.shape[0]
        for key in keys:
            a, b, c = key
            for a2 in range(n):
                if mat[a, a2] != 0:
                    for b2 in range(n):
                        if mat[b, b2] != 0:
                            add((g, a2, b2, c), key, mat[a, a2] * mat[b, b2])
            for r in range(n):
                if mat[r, c] != 0:
                    add((g, a, b, r), key, -mat[r, c])
    return [{j: v for j, v in row.items() if v != 0} for row in equations.values()]


@dataclass
class NomizuSpace:
    decomposition: ReductiveDecomposition
    basis: List[NomizuMap]
    blocks: Dict[str, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "blocks": dict(self.blocks), "m": self.decomposition.m_space.sdim_str()}


def _keys(d: ReductiveDecomposition, block: Optional[Tuple[int, int, int]] = None) -> List[Key]:
    p = d.m_space.parities
    n = len(p)
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                pattern = (p[a], p[b], p[c])
                if sum(pattern) % 2:
                    continue
                if block is None or pattern == block:
                    out.append((a, b, c))
    return out


def nomizu_space(d: ReductiveDecomposition, extra_generators: Sequence[np.ndarray] = ()) -> NomizuSpace:
    """Basis of the even h-equivariant maps m -> gl(m).

    When h is purely even the four parity blocks are invariant and are solved separately;
    `extra_generators` are m-matrices of additional group elements L must commute with.
    """
    g = d.algebra
    for i in d.h_indices:
        for a in d.m_indices:
            if any(k not in d.m_position for k in g.structure(i, a)):
                raise ValueError(f"decomposition is not reductive: [{g.labels[i]},{g.labels[a]}] leaves m")
    even_h = all(g.parities[i] == 0 for i in d.h_indices)
    blocks = list(BLOCKS) if even_h else [None]
    basis: List[NomizuMap] = []
    dims: Dict[str, int] = {}
    for block in blocks:
        keys = _keys(d, block)
        rows = _equivariance_rows(d, keys, extra_generators)
        kernel = kernel_of_rows(rows, len(keys))
        logger.debug(f"nomizu block {block}: {len(keys)} unknowns, {len(rows)} equations, dim {len(kernel)}")
        if block is not None:
            dims[BLOCKS[block]] = len(kernel)
        for vec in kernel:
            basis.append(NomizuMap.from_coefficients(d, {keys[j]: v for j, v in vec.items()}))
    logger.info(f"nomizu space of m={d.m_space.sdim_str()}: dimension {len(basis)} {dims}")
    return NomizuSpace(d, basis, dims)


def _flat(n: NomizuMap) -> SparseRow:
    size = n.dim
    return {(a * size + b) * size + c: v for (a, b, c), v in n.coefficients().items()}


def nomizu_membership(space: NomizuSpace, n: NomizuMap) -> bool:
    echelon = EchelonBasis()
    for b in space.basis:
        echelon.add(_flat(b))
    return echelon.contains(_flat(n))


def check_nomizu_equivariance(n: NomizuMap) -> CheckReport:
    """Direct evaluation of L([b,A]) = [ad_b, L(A)] for every b in h and A in m."""
    d = n.decomposition
    g = d.algebra
    labels = d.m_space.labels
    p = n.parities
    report = CheckReport("nomizu-equivariance")
    for i in d.h_indices:
        ad = d.ad_on_m(i)
        for a in range(n.dim):
            lhs = qzeros(n.dim, n.dim)
            for k in range(n.dim):
                if ad[k, a] != 0:
                    lhs = lhs + n.operators[k] * ad[k, a]
            sign = -1 if g.parities[i] and p[a] else 1
            rhs = ad.dot(n.operators[a]) - n.operators[a].dot(ad) * sign
            report.record(is_zero(lhs - rhs), {"h": g.labels[i], "A": labels[a]})
    return report


##distinguished connections
def canonical_nomizu(d: ReductiveDecomposition) -> NomizuMap:
    return NomizuMap.zero(d, "canonical")


def natural_torsion_free(d: ReductiveDecomposition) -> NomizuMap:
    """L(A)B = ½[A,B]_m."""
    half = Fraction(1, 2)
    coeffs = {}
    for a in range(len(d.m_indices)):
        for b in range(len(d.m_indices)):
            for c, v in d.bracket_m(a, b).items():
                coeffs[(a, b, c)] = half * v
    return NomizuMap.from_coefficients(d, coeffs, "natural-torsion-free")


def supersymmetry_nomizu(d: ReductiveDecomposition) -> NomizuMap:
    """L(X)|_{g1} = ad_X for X in m0, every other block zero; needs an even h and all of g1 in m."""
    g = d.algebra
    odd_h = [g.labels[i] for i in d.h_indices if g.parities[i]]
    if odd_h:
        raise ShapeError(f"supersymmetry connection needs an even stability algebra, found {odd_h}")
    p = d.m_space.parities
    coeffs = {}
    for a in range(len(p)):
        if p[a]:
            continue
        for b in range(len(p)):
            if not p[b]:
                continue
            for c, v in d.m_coords(g.structure(d.m_indices[a], d.m_indices[b])).items():
                coeffs[(a, b, c)] = v
    return NomizuMap.from_coefficients(d, coeffs, "supersymmetry")


def metric_matrix(d: ReductiveDecomposition, metric) -> np.ndarray:
    if isinstance(metric, SuperBilinearForm):
        if metric.target.dim != 1:
            raise DimensionMismatchError("a metric takes values in the scalars")
        mat = metric.coefficients[0]
    else:
        mat = as_qmatrix(metric)
    n = len(d.m_indices)
    if mat.shape != (n, n):
        raise DimensionMismatchError(f"metric of shape {mat.shape} on an m of dimension {n}")
    return mat


def check_metric(d: ReductiveDecomposition, metric) -> CheckReport:
    """Even, super-symmetric and h-invariant."""
    G = metric_matrix(d, metric)
    g = d.algebra
    p = d.m_space.parities
    labels = d.m_space.labels
    n = len(p)
    report = CheckReport("metric")
    for a in range(n):
        for b in range(n):
            sign = -1 if p[a] and p[b] else 1
            report.record(G[a, b] == sign * G[b, a], {"symmetry": [labels[a], labels[b]]})
            if p[a] != p[b]:
                report.record(G[a, b] == 0, {"parity": [labels[a], labels[b]]})
    for i in d.h_indices:
        ad = d.ad_on_m(i)
        for a in range(n):
            for b in range(n):
                sign = -1 if g.parities[i] and p[a] else 1
                value = sum((ad[k, a] * G[k, b] for k in range(n) if ad[k, a] != 0), ZERO) \
                    + sign * sum((G[a, k] * ad[k, b] for k in range(n) if ad[k, b] != 0), ZERO)
                report.record(value == 0, {"h": g.labels[i], "pair": [labels[a], labels[b]]})
    return report


def levi_civita_nomizu(d: ReductiveDecomposition, metric) -> NomizuMap:
    """L(A)B = ½[A,B]_m + U(A,B) with
    2g(U(A,B),C) = (−1)^{|B||C|} g(A,[C,B]_m) + (−1)^{|C|(|A|+|B|)} g([C,A]_m,B)."""
    G = metric_matrix(d, metric)
    n = len(d.m_indices)
    if rank(G) != n:
        raise DegenerateFormError(f"metric on m has rank {rank(G)} < {n}")
    report = check_metric(d, G)
    if not report.passed:
        raise ValueError(f"metric is not an even invariant super-symmetric form: {report.first_failure}")
    p = d.m_space.parities
    brackets = {(a, b): d.bracket_m(a, b) for a in range(n) for b in range(n)}

    def g_of(x: Dict[int, Fraction], b: int) -> Fraction:
        return sum((v * G[k, b] for k, v in x.items()), ZERO)

    def g_with(a: int, x: Dict[int, Fraction]) -> Fraction:
        return sum((G[a, k] * v for k, v in x.items()), ZERO)

    ##row vector rhs[C] of g(U(A,B), ·); U(A,B) = G^{-T} rhs
    g_inv_t = inverse(G.T)
    half = Fraction(1, 2)
    ops = [qzeros(n, n) for _ in range(n)]
    for a in range(n):
        for b in range(n):
            rhs = np.array([ZERO] * n, dtype=object)
            for c in range(n):
                s1 = -1 if p[b] and p[c] else 1
                s2 = -1 if p[c] and (p[a] + p[b]) % 2 else 1
                rhs[c] = half * (s1 * g_with(a, brackets[(c, b)]) + s2 * g_of(brackets[(c, a)], b))
            u = g_inv_t.dot(rhs)
            for c, v in brackets[(a, b)].items():
                u[c] += half * v
            ops[a][:, b] = u
    logger.info(f"levi-civita connection on m={d.m_space.sdim_str()}")
    return NomizuMap(d, ops, "levi-civita")


def check_metric_parallel(n: NomizuMap, metric) -> CheckReport:
    """Each L(A) lies in the super-skew algebra of g:
    g(L(A)B, C) + (−1)^{|A||B|} g(B, L(A)C) = 0."""
    G = metric_matrix(n.decomposition, metric)
    p = n.parities
    labels = n.decomposition.m_space.labels
    report = CheckReport("metric-parallel")
    for a, op in enumerate(n.operators):
        left = op.T.dot(G)
        right = G.dot(op)
        for b in range(n.dim):
            sign = -1 if p[a] and p[b] else 1
            for c in range(n.dim):
                ok = left[b, c] + sign * right[b, c] == 0
                report.record(ok, {"A": labels[a], "B": labels[b], "C": labels[c]})
    return report


def invariant_metric(d: ReductiveDecomposition) -> Optional[np.ndarray]:
    """A nondegenerate even invariant super-symmetric form on m, or None.

    Candidates are the super-symmetrized invariant (0,2)-tensors and their sum.
    """
    n = len(d.m_indices)
    p = d.m_space.parities
    basis = invariants_in_tensor(d, 0, 2, parity=0)
    candidates = []
    for t in basis:
        G = qzeros(n, n)
        for (a, b), c in t.coefficients.items():
            G[a, b] += c / 2
            G[b, a] += c / 2 if not (p[a] and p[b]) else -c / 2
        if not is_zero(G):
            candidates.append(G)
    if len(candidates) > 1:
        candidates.append(sum(candidates[1:], candidates[0]))
    for G in candidates:
        if rank(G) == n and check_metric(d, G).passed:
            return G
    logger.info(f"no nondegenerate invariant metric among {len(candidates)} candidates")
    return None
