from fractions import Fraction
from typing import Dict, List, Tuple
import logging
import numpy as np

from src.catalog.entry import CatalogEntry
from src.clifford.gamma import build_gamma, volume_element
from src.clifford.signature import Signature
from src.clifford.spin import spin_algebra, spin_label, spin_lie_algebra
from src.exactla.errors import CatalogError
from src.exactla.graded import GradedSpace
from src.exactla.rational import HALF, Q
from src.exactla.solve import SparseRow, kernel_of_rows
from src.liesuper.algebra import LieSuperalgebra, Sparse
from src.liesuper.decomposition import ReductiveDecomposition

logger = logging.getLogger(__name__)

SPACETIME = Signature(1, 3)


def _even_table(labels: List[str], eta, vector_action, spin_table) -> Dict[Tuple[int, int], Sparse]:
    idx = {x: k for k, x in enumerate(labels)}
    n = len(eta)
    m_labels = [spin_label(i, j, n) for i in range(n) for j in range(i + 1, n)]
    table: Dict[Tuple[int, int], Sparse] = {}
    for (a, b), res in spin_table.table_items():
        table[(idx[m_labels[a]], idx[m_labels[b]])] = {idx[m_labels[k]]: v for k, v in res.items()}
    for k, w in enumerate(vector_action):
        for prefix in ("v", "k"):
            for j in range(n):
                res = {idx[f"{prefix}{i}"]: w[i, j] for i in range(n) if w[i, j] != 0}
                if res:
                    table[(idx[m_labels[k]], idx[f"{prefix}{j}"])] = res
    for j in range(n):
        table[(idx["d"], idx[f"v{j}"])] = {idx[f"v{j}"]: Fraction(1)}
        table[(idx["d"], idx[f"k{j}"])] = {idx[f"k{j}"]: Fraction(-1)}
    ##[v_i, k_j] = 2η_ij d − 2 v_i∧v_j
    for i in range(n):
        for j in range(n):
            res: Sparse = {}
            if i == j:
                res[idx["d"]] = Fraction(2 * eta[i])
            else:
                lo, hi = min(i, j), max(i, j)
                res[idx[spin_label(lo, hi, n)]] = Fraction(-2 if i < j else 2)
            table[(idx[f"v{i}"], idx[f"k{j}"])] = res
    return table


def _odd_actions(labels: List[str], rep, sp) -> Dict[int, np.ndarray]:
    """Matrix of each even basis element on the odd part S + S' (8 x 8)."""
    n, size = rep.n, rep.spin_dim
    J = volume_element(rep)
    zero = np.zeros((size, size), dtype=object)
    zero.fill(Fraction(0))

    def blocks(a, b, c, d):
        return np.block([[a, b], [c, d]])

    eye = np.eye(size, dtype=int).astype(object) * Fraction(1)
    out = {labels.index("1"): blocks(J, zero, zero, -J),
           labels.index("d"): blocks(eye * HALF, zero, zero, -eye * HALF)}
    for k, (i, j) in enumerate(sp.pairs):
        g = sp.generators[k]
        out[labels.index(spin_label(i, j, n))] = blocks(g, zero, zero, g)
    for i in range(n):
        ##[v,(s,s')] = (v·s', 0) and [v',(s,s')] = −(0, v'·s)
        out[labels.index(f"v{i}")] = blocks(zero, rep.gammas[i], zero, zero)
        out[labels.index(f"k{i}")] = blocks(zero, zero, -rep.gammas[i], zero)
    return out


def _solve_odd_odd(even: LieSuperalgebra, actions: Dict[int, np.ndarray], n_odd: int) -> List[SparseRow]:
    """Kernel of the even-odd-odd and odd-odd-odd identities in the unknown brackets U(a,b), a <= b."""
    ne = even.dim
    pairs = [(a, b) for a in range(n_odd) for b in range(a, n_odd)]
    slot = {pair: p for p, pair in enumerate(pairs)}

    def var(a: int, b: int, k: int) -> int:
        return slot[(min(a, b), max(a, b))] * ne + k

    rows: List[SparseRow] = []
    for x in range(ne):
        A = actions[x]
        for a, b in pairs:
            for c in range(ne):
                row: Dict[int, Fraction] = {}
                for k in range(ne):
                    v = even.structure(x, k).get(c)
                    if v:
                        row[var(a, b, k)] = row.get(var(a, b, k), 0) + v
                for e in range(n_odd):
                    if A[e, a] != 0:
                        row[var(e, b, c)] = row.get(var(e, b, c), 0) - A[e, a]
                    if A[e, b] != 0:
                        row[var(a, e, c)] = row.get(var(a, e, c), 0) - A[e, b]
                row = {j: v for j, v in row.items() if v != 0}
                if row:
                    rows.append(row)
    for a in range(n_odd):
        for b in range(a, n_odd):
            for c in range(b, n_odd):
                for e in range(n_odd):
                    row = {}
                    ##[o_x, U(y,z)] = −Σ_k U(y,z)_k A_k o_x
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        for k in range(ne):
                            v = actions[k][e, x]
                            if v != 0:
                                row[var(y, z, k)] = row.get(var(y, z, k), 0) - v
                    row = {j: v for j, v in row.items() if v != 0}
                    if row:
                        rows.append(row)
    logger.info(f"odd-odd bracket: {len(pairs) * ne} unknowns, {len(rows)} equations")
    return kernel_of_rows(rows, len(pairs) * ne)


def build_wess_zumino(r=1) -> CatalogEntry:
    """Superconformal algebra of Wess and Zumino over Q after rescaling V and V' by √2.

    g0 = R·1 + R·d + so(1,3) + V + V', g1 = S + S'; the odd-odd bracket is the unique solution of the
    Jacobi identities, normalized to a leading coefficient r.
    """
    r = Q(r)
    if r == 0:
        raise ValueError("the Wess-Zumino scale must be nonzero")
    rep = build_gamma(SPACETIME)
    sp = spin_algebra(rep)
    n = rep.n
    m_labels = [spin_label(i, j, n) for i, j in sp.pairs]
    even_labels = ["1", "d"] + m_labels + [f"v{i}" for i in range(n)] + [f"k{i}" for i in range(n)]
    odd_labels = [f"s{a}" for a in range(rep.spin_dim)] + [f"t{a}" for a in range(rep.spin_dim)]
    even = LieSuperalgebra(GradedSpace.even(even_labels),
                           _even_table(even_labels, rep.eta, sp.vector_action, spin_lie_algebra(sp)))
    actions = _odd_actions(even_labels, rep, sp)
    n_odd = len(odd_labels)
    sols = _solve_odd_odd(even, actions, n_odd)
    if len(sols) != 1:
        raise CatalogError(f"expected a unique odd-odd bracket up to scale, found {len(sols)} solutions")
    sol = sols[0]
    lead = sol[min(sol)]
    ne = len(even_labels)
    table: Dict[Tuple[int, int], Sparse] = {key: dict(v) for key, v in even.table_items()}
    for x, A in actions.items():
        for b in range(n_odd):
            res = {ne + c: A[c, b] for c in range(n_odd) if A[c, b] != 0}
            if res:
                table[(x, ne + b)] = res
    pairs = [(a, b) for a in range(n_odd) for b in range(a, n_odd)]
    for p, (a, b) in enumerate(pairs):
        res = {k: sol[p * ne + k] * r / lead for k in range(ne) if p * ne + k in sol}
        if res:
            table[(ne + a, ne + b)] = res
    g = LieSuperalgebra(GradedSpace(tuple(even_labels + odd_labels), (0,) * ne + (1,) * n_odd), table)
    h = ["1", "d"] + m_labels
    m = [x for x in even_labels if x not in h] + odd_labels
    d = ReductiveDecomposition.from_labels(g, h, m)
    provenance = ("Wess-Zumino superconformal algebra: v = sqrt2 * (translation), k = sqrt2 * (special conformal), "
                  "so [v,(s,s')] = (v.s', 0), [k,(s,s')] = -(0, k.s) and [v_i,k_j] = 2 eta_ij d - 2 v_i^v_j; "
                  f"[1,(s,s')] = (Js,-Js') with J the volume element of Cl(1,3); the odd-odd bracket is the "
                  f"one-dimensional solution of the Jacobi identities scaled to leading coefficient {r}")
    logger.info(f"built wess-zumino: {g.space.sdim_str()}")
    return CatalogEntry("wess-zumino", g, d, None, None, provenance)


def twistor_spinor_data(entry: CatalogEntry) -> Dict[str, Dict[str, Dict[str, str]]]:
    """ψ^{s'}(v) = −[v, s'] for each s' in S' and translation v, as S-vectors."""
    g = entry.algebra
    n = SPACETIME.n
    out = {}
    for t in (x for x in g.labels if x.startswith("t")):
        j = g.index(t)
        out[t] = {f"v{i}": g.describe({k: -c for k, c in g.structure(g.index(f"v{i}"), j).items()})
                  for i in range(n)}
    return out
