from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple
import logging
import numpy as np

from src.exactla.rational import HALF, Q, ZERO
from src.exactla.reports import CheckReport
from src.liesuper.forms import SuperBilinearForm
from src.svf.fields import SplitDomain
from src.svf.polynomial import SuperPolynomial

logger = logging.getLogger(__name__)


@dataclass
class HopfTranslation:
    """Coordinate Hopf superalgebra of the translation supergroup V + S with product twisted by Γ.

    m*(x^k) = x^k ⊗ 1 + 1 ⊗ x^k − ½ Γ^k_{αβ} s^α ⊗ s^β,  m*(s^α) = s^α ⊗ 1 + 1 ⊗ s^α,
    i*(x^k) = −x^k,  i*(s^α) = −s^α.
    Tensor powers are modelled as one polynomial ring holding consecutive copies of the coordinates.
    """
    gamma: np.ndarray

    @property
    def n_even(self) -> int:
        return self.gamma.shape[0]

    @property
    def n_odd(self) -> int:
        return self.gamma.shape[1]

    def _ring(self, copies: int) -> Tuple[int, int]:
        return self.n_even * copies, self.n_odd * copies

    def _x(self, copies: int, copy: int, k: int) -> SuperPolynomial:
        return SuperPolynomial.x(*self._ring(copies), copy * self.n_even + k)

    def _s(self, copies: int, copy: int, alpha: int) -> SuperPolynomial:
        return SuperPolynomial.s(*self._ring(copies), copy * self.n_odd + alpha)

    def _delta_x(self, copies: int, i: int, j: int, k: int) -> SuperPolynomial:
        out = self._x(copies, i, k) + self._x(copies, j, k)
        for a in range(self.n_odd):
            for b in range(self.n_odd):
                if self.gamma[k, a, b] != 0:
                    out = out - (self._s(copies, i, a) * self._s(copies, j, b)).scaled(HALF * self.gamma[k, a, b])
        return out

    def _delta_s(self, copies: int, i: int, j: int, a: int) -> SuperPolynomial:
        return self._s(copies, i, a) + self._s(copies, j, a)

    ##generators
    def coordinate(self, kind: str, k: int) -> SuperPolynomial:
        return self._x(1, 0, k) if kind == "x" else self._s(1, 0, k)

    def generators(self) -> List[Tuple[str, SuperPolynomial]]:
        return ([(f"x^{k}", self.coordinate("x", k)) for k in range(self.n_even)]
                + [(f"s^{a}", self.coordinate("s", a)) for a in range(self.n_odd)])

    ##structure maps
    def comultiplication(self, f: SuperPolynomial) -> SuperPolynomial:
        return f.substitute([self._delta_x(2, 0, 1, k) for k in range(self.n_even)],
                            [self._delta_s(2, 0, 1, a) for a in range(self.n_odd)])

    def antipode(self, f: SuperPolynomial) -> SuperPolynomial:
        return f.substitute([self._x(1, 0, k).scaled(-1) for k in range(self.n_even)],
                            [self._s(1, 0, a).scaled(-1) for a in range(self.n_odd)])

    def counit(self, f: SuperPolynomial) -> Fraction:
        return f.body()

    def _tensor_map(self, copies_in: int, even_maps, odd_maps) -> Tuple[list, list]:
        """Images of the generators of copies_in copies, one rule per input copy."""
        even, odd = [], []
        for c in range(copies_in):
            even += [even_maps[c](k) for k in range(self.n_even)]
            odd += [odd_maps[c](a) for a in range(self.n_odd)]
        return even, odd

    def check_axioms(self) -> CheckReport:
        report = CheckReport("hopf-axioms")
        zero1 = lambda k: SuperPolynomial(*self._ring(1))
        for name, f in self.generators():
            mf = self.comultiplication(f)
            ##coassociativity on three copies
            left = mf.substitute(*self._tensor_map(2,
                                                   [lambda k: self._delta_x(3, 0, 1, k), lambda k: self._x(3, 2, k)],
                                                   [lambda a: self._delta_s(3, 0, 1, a), lambda a: self._s(3, 2, a)]))
            right = mf.substitute(*self._tensor_map(2,
                                                    [lambda k: self._x(3, 0, k), lambda k: self._delta_x(3, 1, 2, k)],
                                                    [lambda a: self._s(3, 0, a), lambda a: self._delta_s(3, 1, 2, a)]))
            report.record(left == right, {"axiom": "coassociativity", "generator": name,
                                          "lhs": str(left), "rhs": str(right)})
            ##counit on either side
            for side in (0, 1):
                ev = [zero1, lambda k: self._x(1, 0, k)] if side == 0 else [lambda k: self._x(1, 0, k), zero1]
                od = [zero1, lambda a: self._s(1, 0, a)] if side == 0 else [lambda a: self._s(1, 0, a), zero1]
                res = mf.substitute(*self._tensor_map(2, ev, od))
                report.record(res == f, {"axiom": f"counit-{side}", "generator": name, "result": str(res)})
            ##antipode convolution: μ∘(i*⊗Id)∘m* = μ∘(Id⊗i*)∘m* = ε
            for side in (0, 1):
                neg_x = lambda k: self._x(1, 0, k).scaled(-1)
                neg_s = lambda a: self._s(1, 0, a).scaled(-1)
                id_x = lambda k: self._x(1, 0, k)
                id_s = lambda a: self._s(1, 0, a)
                ev = [neg_x, id_x] if side == 0 else [id_x, neg_x]
                od = [neg_s, id_s] if side == 0 else [id_s, neg_s]
                res = mf.substitute(*self._tensor_map(2, ev, od))
                expected = SuperPolynomial.constant(*self._ring(1), self.counit(f))
                report.record(res == expected, {"axiom": f"antipode-{side}", "generator": name,
                                                "result": str(res)})
        logger.info(f"hopf axioms: {report.checked} checks, passed={report.passed}")
        return report

    def to_dict(self) -> Dict[str, Dict[str, str]]:
        return {"comultiplication": {name: str(self.comultiplication(f)) for name, f in self.generators()},
                "antipode": {name: str(self.antipode(f)) for name, f in self.generators()}}


def hopf_translation(gamma) -> HopfTranslation:
    """Accepts a SplitDomain, a SuperBilinearForm or a (k, α, β) array of structure constants."""
    if isinstance(gamma, SplitDomain):
        arr = gamma.gamma
    elif isinstance(gamma, SuperBilinearForm):
        arr = gamma.coefficients
    else:
        arr = np.asarray(gamma, dtype=object)
    arr = np.vectorize(Q, otypes=[object])(arr) if arr.size else np.full(arr.shape, ZERO, dtype=object)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"Γ must have shape (m, n, n), got {arr.shape}")
    if any(arr[k, a, b] != arr[k, b, a] for k in range(arr.shape[0])
           for a in range(arr.shape[1]) for b in range(arr.shape[2])):
        raise ValueError("Γ must be symmetric in its spinor arguments")
    return HopfTranslation(arr)
