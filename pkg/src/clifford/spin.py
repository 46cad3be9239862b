from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Tuple
import logging
import numpy as np

from src.clifford.gamma import CliffordRep
from src.exactla.errors import NotInSpanError
from src.exactla.graded import GradedSpace
from src.exactla.rational import HALF, Q, ZERO, commutator, is_zero, qzeros, sort_with_sign
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra

logger = logging.getLogger(__name__)


def spin_label(i: int, j: int, n: int) -> str:
    return f"M{i}{j}" if n <= 10 else f"M{i}_{j}"


@dataclass
class SpinLieAlgebra:
    """spin(r,s) spanned by ½γ_iγ_j (= ¼[γ_i,γ_j]) with its image v_i∧v_j in so(r,s)."""
    rep: CliffordRep
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    generators: List[np.ndarray] = field(default_factory=list)
    vector_action: List[np.ndarray] = field(default_factory=list)

    @property
    def labels(self) -> List[str]:
        return [spin_label(i, j, self.rep.n) for i, j in self.pairs]

    def adjacent(self) -> List[int]:
        """Positions of ½γ_iγ_{i+1}; these generate the algebra."""
        return [k for k, (i, j) in enumerate(self.pairs) if j == i + 1]


def wedge(rep: CliffordRep, i: int, j: int) -> np.ndarray:
    """(v_i∧v_j)(u) = ⟨v_i,u⟩v_j − ⟨v_j,u⟩v_i."""
    eta = rep.eta
    out = qzeros(rep.n, rep.n)
    out[j, i] += eta[i]
    out[i, j] -= eta[j]
    return out


def spin_algebra(rep: CliffordRep) -> SpinLieAlgebra:
    sp = SpinLieAlgebra(rep)
    for i, j in combinations(range(rep.n), 2):
        sp.pairs.append((i, j))
        sp.generators.append(rep.gammas[i].dot(rep.gammas[j]) * HALF)
        sp.vector_action.append(wedge(rep, i, j))
    return sp


def xi_star(sp: SpinLieAlgebra, element: np.ndarray) -> np.ndarray:
    """so(r,s) image of a spin element, read off from [A, γ_k] = Σ_l M_lk γ_l."""
    rep = sp.rep
    n, size = rep.n, rep.spin_dim
    out = qzeros(n, n)
    for k in range(n):
        c = commutator(element, rep.gammas[k])
        for l in range(n):
            tr = Q(np.sum(rep.gammas[l].T * c))
            out[l, k] = tr / (-rep.eta[l] * size)
    if not is_zero(xi_star_inv(sp, out) - element):
        raise NotInSpanError("element does not lie in the span of the spin generators")
    return out


def xi_star_inv(sp: SpinLieAlgebra, m: np.ndarray) -> np.ndarray:
    rep = sp.rep
    out = qzeros(rep.spin_dim, rep.spin_dim)
    for (i, j), gen in zip(sp.pairs, sp.generators):
        c = Q(m[j, i]) / rep.eta[i]
        if c != 0:
            out = out + gen * c
    return out


def so_coordinates(sp: SpinLieAlgebra, m: np.ndarray) -> Dict[int, object]:
    """Coefficients of m in the basis v_i∧v_j."""
    eta = sp.rep.eta
    return {k: Q(m[j, i]) / eta[i] for k, (i, j) in enumerate(sp.pairs) if m[j, i] != 0}


def spin_lie_algebra(sp: SpinLieAlgebra) -> LieSuperalgebra:
    labels = sp.labels
    table = {}
    for a in range(len(sp.pairs)):
        for b in range(a + 1, len(sp.pairs)):
            br = commutator(sp.vector_action[a], sp.vector_action[b])
            coords = so_coordinates(sp, br)
            if coords:
                table[(a, b)] = coords
    return LieSuperalgebra(GradedSpace.even(labels), table)


def check_xi_star(sp: SpinLieAlgebra) -> CheckReport:
    """ξ⁎ and its inverse are mutually inverse and bracket preserving on all generator pairs."""
    report = CheckReport("xi-star")
    for a, gen in enumerate(sp.generators):
        report.record(is_zero(xi_star(sp, gen) - sp.vector_action[a]), {"generator": sp.labels[a]})
        for b in range(a + 1, len(sp.generators)):
            lhs = xi_star(sp, commutator(gen, sp.generators[b]))
            rhs = commutator(sp.vector_action[a], sp.vector_action[b])
            report.record(is_zero(lhs - rhs), {"pair": [sp.labels[a], sp.labels[b]]})
    return report


def wedge_basis(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(n), k))


def wedge_power_action(m: np.ndarray, k: int) -> np.ndarray:
    """Derivation action of m ∈ gl(V) on Λ^k V in the sorted basis e_I."""
    n = m.shape[0]
    basis = wedge_basis(n, k)
    pos = {I: a for a, I in enumerate(basis)}
    out = qzeros(len(basis), len(basis))
    for col, I in enumerate(basis):
        for slot, i in enumerate(I):
            for l in range(n):
                c = m[l, i]
                if c == 0:
                    continue
                sign, J = sort_with_sign(I[:slot] + (l,) + I[slot + 1:])
                if sign:
                    out[pos[J], col] += sign * c
    return out
