from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.exactla.errors import DimensionMismatchError, NotInSpanError
from src.exactla.graded import GradedMap, GradedSpace, tensor_basis
from src.exactla.rational import Q, ZERO, as_qmatrix, qvector, qzeros

logger = logging.getLogger(__name__)

SparseRow = Dict[int, Fraction]


def _qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def _rref(rows: Sequence[SparseRow], ncols: int) -> Tuple[Dict[int, Dict[int, Fraction]], Tuple[int, ...]]:
    """Reduced row echelon form over QQ of a sparse system; returns (rows by index, pivot columns)."""
    dod = {}
    for i, row in enumerate(rows):
        clean = {j: _qq(Q(v)) for j, v in row.items() if v != 0}
        if clean:
            dod[len(dod)] = clean
    if not dod:
        return {}, ()
    dm = DomainMatrix(dod, (len(dod), ncols), QQ)
    reduced, pivots = dm.rref()
    out = {}
    for i, row in dict(reduced.to_sparse().rep).items():
        out[i] = {j: Q(v) for j, v in row.items()}
    return out, tuple(pivots)


def _nullspace(rows: Sequence[SparseRow], ncols: int) -> List[SparseRow]:
    reduced, pivots = _rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = {f: Fraction(1)}
        for i, p in enumerate(pivots):
            c = reduced.get(i, {}).get(f, ZERO)
            if c != 0:
                vec[p] = -c
        basis.append(vec)
    return basis


def _components(rows: Sequence[SparseRow], nvars: int) -> List[Tuple[List[int], List[int]]]:
    ##union-find over variables sharing an equation
    parent = list(range(nvars))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        cols = [j for j, v in row.items() if v != 0]
        for j in cols[1:]:
            a, b = find(cols[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: Dict[int, Tuple[List[int], List[int]]] = {}
    for j in range(nvars):
        groups.setdefault(find(j), ([], []))[0].append(j)
    for i, row in enumerate(rows):
        cols = [j for j, v in row.items() if v != 0]
        if cols:
            groups[find(cols[0])][1].append(i)
    return [groups[k] for k in sorted(groups)]


def kernel_of_rows(rows: Sequence[SparseRow], nvars: int) -> List[SparseRow]:
    """Sparse nullspace, solved independently on each connected block of the system."""
    comps = _components(rows, nvars)
    logger.debug(f"kernel: {len(rows)} equations, {nvars} unknowns, {len(comps)} blocks")
    basis: List[SparseRow] = []
    for variables, row_ids in comps:
        if not row_ids:
            basis.extend({j: Fraction(1)} for j in variables)
            continue
        local = {j: k for k, j in enumerate(variables)}
        sub = [{local[j]: v for j, v in rows[i].items() if v != 0} for i in row_ids]
        for vec in _nullspace(sub, len(variables)):
            basis.append({variables[k]: v for k, v in vec.items()})
    basis.sort(key=lambda v: min(v))
    return basis


def _matrix_rows(m: np.ndarray) -> List[SparseRow]:
    return [{j: Q(x) for j, x in enumerate(row) if x != 0} for row in m]


def _dense(vec: SparseRow, n: int) -> np.ndarray:
    out = qvector([0] * n)
    for j, v in vec.items():
        out[j] = v
    return out


def kernel(m) -> List[np.ndarray]:
    """Echelon-normalized basis of ker(m); each vector has a 1 in its own free column."""
    mat = m.matrix if isinstance(m, GradedMap) else as_qmatrix(m)
    ncols = mat.shape[1]
    return [_dense(v, ncols) for v in kernel_of_rows(_matrix_rows(mat), ncols)]


def rank(m) -> int:
    mat = m.matrix if isinstance(m, GradedMap) else as_qmatrix(m)
    return len(_rref(_matrix_rows(mat), mat.shape[1])[1])


def span_basis(vectors: Iterable, n: Optional[int] = None) -> List[np.ndarray]:
    """Reduced echelon basis of the span of the given vectors."""
    vecs = [np.asarray(v, dtype=object) for v in vectors]
    if n is None:
        if not vecs:
            return []
        n = len(vecs[0])
    reduced, pivots = _rref([{j: Q(x) for j, x in enumerate(v) if x != 0} for v in vecs], n)
    return [_dense(reduced[i], n) for i in range(len(pivots))]


def in_span(basis: Sequence, vector) -> bool:
    if not basis:
        return all(x == 0 for x in vector)
    return len(span_basis(list(basis) + [vector])) == len(span_basis(basis))


def solve_many(a, rhs: Sequence) -> List[np.ndarray]:
    """One particular solution of a·x = b for each b; raises NotInSpanError when inconsistent."""
    mat = as_qmatrix(a)
    rows_n, cols_n = mat.shape
    k = len(rhs)
    rows = []
    for i in range(rows_n):
        row = {j: Q(x) for j, x in enumerate(mat[i]) if x != 0}
        for t, b in enumerate(rhs):
            if b[i] != 0:
                row[cols_n + t] = Q(b[i])
        rows.append(row)
    reduced, pivots = _rref(rows, cols_n + k)
    if any(p >= cols_n for p in pivots):
        raise NotInSpanError("linear system has no solution")
    out = []
    for t in range(k):
        x = qvector([0] * cols_n)
        for i, p in enumerate(pivots):
            x[p] = reduced.get(i, {}).get(cols_n + t, ZERO)
        out.append(x)
    return out


def solve_linear(a, b) -> np.ndarray:
    return solve_many(a, [b])[0]


def inverse(a) -> np.ndarray:
    mat = as_qmatrix(a)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise DimensionMismatchError(f"cannot invert a {mat.shape} matrix")
    if rank(mat) != n:
        raise NotInSpanError("matrix is singular")
    cols = solve_many(mat, [[1 if i == j else 0 for i in range(n)] for j in range(n)])
    out = qzeros(n, n)
    for j, c in enumerate(cols):
        out[:, j] = c
    return out


def coordinates(basis: Sequence, vector) -> np.ndarray:
    """Coefficients of `vector` in the given independent family."""
    n = len(vector)
    a = qzeros(n, len(basis))
    for j, b in enumerate(basis):
        a[:, j] = np.asarray(b, dtype=object)
    return solve_linear(a, vector)


##equivariance
def _check_actions(actions: Sequence, dim: int, side: str) -> List[np.ndarray]:
    out = []
    for a in actions:
        mat = a.matrix if isinstance(a, GradedMap) else as_qmatrix(a)
        if mat.shape != (dim, dim):
            raise DimensionMismatchError(f"{side} action of shape {mat.shape} on a {dim}-dimensional space")
        out.append(mat)
    return out


def equivariant_subspace(actions_on_domain: Sequence, actions_on_codomain: Sequence,
                         dim_domain: Optional[int] = None, dim_codomain: Optional[int] = None) -> List[np.ndarray]:
    """Basis of all T with T·ρ_dom(x) = ρ_cod(x)·T for each generator x."""
    if len(actions_on_domain) != len(actions_on_codomain):
        raise DimensionMismatchError(
            f"{len(actions_on_domain)} domain actions but {len(actions_on_codomain)} codomain actions")
    if dim_domain is None:
        dim_domain = _first_dim(actions_on_domain)
    if dim_codomain is None:
        dim_codomain = _first_dim(actions_on_codomain)
    dom = _check_actions(actions_on_domain, dim_domain, "domain")
    cod = _check_actions(actions_on_codomain, dim_codomain, "codomain")
    nd, nc = dim_domain, dim_codomain
    rows: List[SparseRow] = []
    for rd, rc in zip(dom, cod):
        for i in range(nc):
            for j in range(nd):
                row: SparseRow = {}
                for k in range(nd):
                    if rd[k, j] != 0:
                        row[i * nd + k] = row.get(i * nd + k, ZERO) + rd[k, j]
                for k in range(nc):
                    if rc[i, k] != 0:
                        row[k * nd + j] = row.get(k * nd + j, ZERO) - rc[i, k]
                if any(v != 0 for v in row.values()):
                    rows.append(row)
    out = []
    for vec in kernel_of_rows(rows, nc * nd):
        t = qzeros(nc, nd)
        for idx, v in vec.items():
            t[idx // nd, idx % nd] = v
        out.append(t)
    return out


def _first_dim(actions: Sequence) -> int:
    if not actions:
        raise DimensionMismatchError("space dimension is required when no actions are given")
    a = actions[0]
    return a.domain.dim if isinstance(a, GradedMap) else np.asarray(a).shape[0]


##tensor representations
def dual_action(matrix: np.ndarray, space: GradedSpace, parity: int) -> np.ndarray:
    """Action on the dual basis: negative supertranspose."""
    mat = as_qmatrix(matrix)
    n = mat.shape[0]
    out = qzeros(n, n)
    for i in range(n):
        for j in range(n):
            if mat[j, i] != 0:
                sign = -1 if (parity and space.parities[j]) else 1
                out[i, j] = -sign * mat[j, i]
    return out


def sparse_tensor_action(factors: Sequence[GradedSpace], matrices: Sequence[np.ndarray],
                         dual: Sequence[bool], parity: int,
                         keys: Optional[Sequence[Tuple[int, ...]]] = None) -> Dict[Tuple[int, ...], Dict[Tuple[int, ...], Fraction]]:
    """Leibniz action of one homogeneous generator, as {source key: {target key: coeff}}."""
    if not (len(factors) == len(matrices) == len(dual)):
        raise DimensionMismatchError("one action matrix and variance flag per factor is required")
    acts = []
    for f, (space, m, d) in enumerate(zip(factors, matrices, dual)):
        mat = as_qmatrix(m)
        if mat.shape != (space.dim, space.dim):
            raise DimensionMismatchError(f"action on factor {f} has shape {mat.shape}, expected {space.dim}")
        if d:
            mat = dual_action(mat, space, parity)
        cols: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (i, j), x in np.ndenumerate(mat):
            if x != 0:
                cols.setdefault(j, []).append((i, x))
        acts.append(cols)
    if keys is None:
        keys = tensor_basis(factors)
    out = {}
    for key in keys:
        image: Dict[Tuple[int, ...], Fraction] = {}
        passed = 0
        for f, cols in enumerate(acts):
            sign = -1 if (parity and passed % 2) else 1
            for i, x in cols.get(key[f], ()):
                target = key[:f] + (i,) + key[f + 1:]
                image[target] = image.get(target, ZERO) + sign * x
            passed += factors[f].parities[key[f]]
        image = {k: v for k, v in image.items() if v != 0}
        if image:
            out[key] = image
    return out


def tensor_action(factors: Sequence[GradedSpace], generators: Sequence[Sequence[np.ndarray]],
                  dual: Sequence[bool], parities: Optional[Sequence[int]] = None) -> List[GradedMap]:
    """Dense action of each generator on the tensor product; generators[g][f] acts on factor f."""
    if parities is None:
        parities = [0] * len(generators)
    keys = tensor_basis(factors)
    position = {k: n for n, k in enumerate(keys)}
    space = GradedSpace(
        tuple("⊗".join(f.labels[i] + ("*" if d else "") for f, i, d in zip(factors, k, dual)) for k in keys),
        tuple(sum(f.parities[i] for f, i in zip(factors, k)) % 2 for k in keys))
    out = []
    for mats, p in zip(generators, parities):
        m = qzeros(len(keys), len(keys))
        for src, image in sparse_tensor_action(factors, mats, dual, p, keys).items():
            for tgt, v in image.items():
                m[position[tgt], position[src]] = v
        out.append(GradedMap.on(space, m, p))
    return out


def joint_kernel(factors: Sequence[GradedSpace], generators: Sequence[Sequence[np.ndarray]],
                 dual: Sequence[bool], parities: Optional[Sequence[int]] = None,
                 parity: Optional[int] = None,
                 keys: Optional[Sequence[Tuple[int, ...]]] = None) -> List[Dict[Tuple[int, ...], Fraction]]:
    """Tensors annihilated by every generator, optionally restricted to one total parity.

    `keys` restricts the unknowns to an invariant block of the tensor basis.
    """
    if parities is None:
        parities = [0] * len(generators)
    keys = tensor_basis(factors, parity) if keys is None else list(keys)
    position = {k: n for n, k in enumerate(keys)}
    equations: Dict[Tuple[int, ...], SparseRow] = {}
    for g, (mats, p) in enumerate(zip(generators, parities)):
        for src, image in sparse_tensor_action(factors, mats, dual, p, keys).items():
            col = position[src]
            for tgt, v in image.items():
                row = equations.setdefault((g,) + tgt, {})
                row[col] = row.get(col, ZERO) + v
    logger.info(f"invariant tensors: {len(keys)} unknowns, {len(equations)} equations")
    basis = kernel_of_rows(list(equations.values()), len(keys))
    return [{keys[j]: v for j, v in vec.items()} for vec in basis]


class EchelonBasis:
    """Growing family of independent sparse vectors; each stored row has a unit pivot
    that every later row vanishes at."""

    def __init__(self):
        self.rows: List[Tuple[int, SparseRow]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: SparseRow) -> SparseRow:
        v = {j: Q(x) for j, x in vector.items() if x != 0}
        for p, row in self.rows:
            c = v.get(p)
            if c:
                for j, x in row.items():
                    y = v.get(j, ZERO) - c * x
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
        return v

    def contains(self, vector: SparseRow) -> bool:
        return not self.reduce(vector)

    def add(self, vector: SparseRow) -> bool:
        """Insert if independent; returns whether the span grew."""
        v = self.reduce(vector)
        if not v:
            return False
        p = min(v)
        c = v[p]
        self.rows.append((p, {j: x / c for j, x in v.items()}))
        return True
