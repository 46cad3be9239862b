from dataclasses import dataclass
from typing import List
import logging

from src.exactla.graded import GradedMap, GradedSpace
from src.exactla.rational import commutator, is_zero
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra, check_super_jacobi

logger = logging.getLogger(__name__)


@dataclass
class Representation:
    algebra: LieSuperalgebra
    module: GradedSpace
    matrices: List[GradedMap]

    def __post_init__(self):
        if len(self.matrices) != self.algebra.dim:
            raise ValueError(f"{len(self.matrices)} matrices for a {self.algebra.dim}-dimensional algebra")
        for lab, p, m in zip(self.algebra.labels, self.algebra.parities, self.matrices):
            if m.parity != p:
                raise ValueError(f"matrix of {lab} has the wrong parity")

    def of(self, x):
        """ρ(x) for a vector x of the algebra."""
        out = self.matrices[0].matrix * 0
        for i, c in enumerate(x):
            if c != 0:
                out = out + self.matrices[i].matrix * c
        return out

    def check(self) -> CheckReport:
        """ρ([x,y]) = ρ(x)ρ(y) − (−1)^{|x||y|}ρ(y)ρ(x) on all basis pairs."""
        g = self.algebra
        report = CheckReport("representation")
        for i in range(g.dim):
            for j in range(g.dim):
                sign = -1 if g.parities[i] and g.parities[j] else 1
                lhs = self.of(g.bracket(g.basis_vector(i), g.basis_vector(j)))
                rhs = commutator(self.matrices[i].matrix, self.matrices[j].matrix, sign)
                report.record(is_zero(lhs - rhs), {"pair": [g.labels[i], g.labels[j]]})
        return report


def adjoint_rep(g: LieSuperalgebra) -> Representation:
    jac = check_super_jacobi(g)
    if not jac.passed:
        raise ValueError(f"adjoint representation needs the Jacobi identity; fails at {jac.first_failure}")
    maps = [GradedMap.on(g.space, g.ad(i), g.parities[i]) for i in range(g.dim)]
    return Representation(g, g.space, maps)
