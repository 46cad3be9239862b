from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple
import logging
import numpy as np

from src.exactla.errors import DecompositionError
from src.exactla.graded import GradedSpace
from src.exactla.rational import qzeros
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra, Sparse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductiveDecomposition:
    algebra: LieSuperalgebra
    h_indices: Tuple[int, ...]
    m_indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "h_indices", tuple(self.h_indices))
        object.__setattr__(self, "m_indices", tuple(self.m_indices))
        h, m = set(self.h_indices), set(self.m_indices)
        if h & m:
            overlap = sorted(self.algebra.labels[i] for i in h & m)
            raise DecompositionError(f"h and m overlap in {overlap}")
        missing = set(range(self.algebra.dim)) - h - m
        if missing or len(h) != len(self.h_indices) or len(m) != len(self.m_indices):
            raise DecompositionError(
                f"h and m must partition the basis; missing {sorted(self.algebra.labels[i] for i in missing)}")

    @classmethod
    def from_labels(cls, algebra: LieSuperalgebra, h: Sequence[str], m: Sequence[str]) -> "ReductiveDecomposition":
        return cls(algebra, tuple(algebra.index(x) for x in h), tuple(algebra.index(x) for x in m))

    @property
    def m_space(self) -> GradedSpace:
        g = self.algebra
        return GradedSpace(tuple(g.labels[i] for i in self.m_indices),
                           tuple(g.parities[i] for i in self.m_indices))

    @property
    def m_position(self) -> Dict[int, int]:
        return {a: n for n, a in enumerate(self.m_indices)}

    ##projections, in coordinates of the whole algebra
    def project_h(self, x: Sparse) -> Sparse:
        h = set(self.h_indices)
        return {k: v for k, v in x.items() if k in h}

    def project_m(self, x: Sparse) -> Sparse:
        m = set(self.m_indices)
        return {k: v for k, v in x.items() if k in m}

    def m_coords(self, x: Sparse) -> Dict[int, object]:
        pos = self.m_position
        return {pos[k]: v for k, v in x.items() if k in pos}

    def bracket_m(self, a: int, b: int) -> Sparse:
        """[m_a, m_b]_m in m-coordinates (a, b are positions in m)."""
        ia, ib = self.m_indices[a], self.m_indices[b]
        return self.m_coords(self.algebra.structure(ia, ib))

    def bracket_h(self, a: int, b: int) -> Sparse:
        ia, ib = self.m_indices[a], self.m_indices[b]
        return self.project_h(self.algebra.structure(ia, ib))

    def ad_on_m(self, i: int) -> np.ndarray:
        """Matrix of ad(b_i)|_m for i in h, in the m-basis."""
        pos = self.m_position
        n = len(self.m_indices)
        out = qzeros(n, n)
        for col, a in enumerate(self.m_indices):
            for k, c in self.algebra.structure(i, a).items():
                if k not in pos:
                    raise DecompositionError(
                        f"[{self.algebra.labels[i]},{self.algebra.labels[a]}] leaves m")
                out[pos[k], col] = c
        return out

    def h_actions(self) -> List[np.ndarray]:
        return [self.ad_on_m(i) for i in self.h_indices]

    @property
    def symmetric(self) -> bool:
        m = self.m_indices
        return all(not self.m_coords(self.algebra.structure(a, b)) for a in m for b in m)


def check_reductive(d: ReductiveDecomposition) -> CheckReport:
    g = d.algebra
    report = CheckReport("reductive")
    h, m = set(d.h_indices), set(d.m_indices)
    for i in d.h_indices:
        for j in d.h_indices:
            stray = [g.labels[k] for k in g.structure(i, j) if k not in h]
            report.record(not stray, {"pair": [g.labels[i], g.labels[j]], "leaves_h": stray})
        for a in d.m_indices:
            stray = [g.labels[k] for k in g.structure(i, a) if k not in m]
            report.record(not stray, {"pair": [g.labels[i], g.labels[a]], "leaves_m": stray})
    report.details["reductive"] = report.passed
    report.details["symmetric"] = d.symmetric
    report.details["degenerate"] = not d.h_indices or not d.m_indices
    logger.info(f"reductive check: passed={report.passed} symmetric={d.symmetric}")
    return report
