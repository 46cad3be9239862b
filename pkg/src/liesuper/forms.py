from dataclasses import dataclass
from typing import List, Optional, Sequence
import logging
import numpy as np

from src.exactla.errors import DimensionMismatchError
from src.exactla.graded import GradedSpace
from src.exactla.rational import Q, ZERO, fmt_rational, is_zero
from src.exactla.reports import CheckReport

logger = logging.getLogger(__name__)

SYMMETRIC, SKEW, NONE = "symmetric", "skew", "none"


def qtensor(shape) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


@dataclass
class SuperBilinearForm:
    """B: left ⊗ right → target with coefficients[k, i, j] = B(e_i, e_j)_k."""
    left: GradedSpace
    right: GradedSpace
    target: GradedSpace
    coefficients: np.ndarray
    symmetry: str = NONE

    def __post_init__(self):
        shape = (self.target.dim, self.left.dim, self.right.dim)
        arr = np.asarray(self.coefficients, dtype=object)
        if arr.shape != shape:
            raise DimensionMismatchError(f"form coefficients of shape {arr.shape}, expected {shape}")
        out = qtensor(shape)
        for idx, x in np.ndenumerate(arr):
            out[idx] = Q(int(x)) if isinstance(x, np.integer) else Q(x)
        self.coefficients = out
        if self.symmetry != NONE and not self.has_symmetry(self.symmetry):
            raise ValueError(f"form declared {self.symmetry} but is not")

    def _sign(self, i: int, j: int) -> int:
        return -1 if self.left.parities[i] and self.right.parities[j] else 1

    def has_symmetry(self, symmetry: str) -> bool:
        if self.left != self.right:
            return False
        want = 1 if symmetry == SYMMETRIC else -1
        c = self.coefficients
        for i in range(self.left.dim):
            for j in range(self.left.dim):
                for k in range(self.target.dim):
                    if c[k, i, j] != want * self._sign(i, j) * c[k, j, i]:
                        return False
        return True

    @property
    def parity(self) -> Optional[int]:
        ps = {(self.target.parities[k] + self.left.parities[i] + self.right.parities[j]) % 2
              for (k, i, j), x in np.ndenumerate(self.coefficients) if x != 0}
        return ps.pop() if len(ps) == 1 else None

    def evaluate(self, s, t) -> np.ndarray:
        s, t = np.asarray(s, dtype=object), np.asarray(t, dtype=object)
        return np.array([s.dot(self.coefficients[k]).dot(t) for k in range(self.target.dim)], dtype=object)

    def component(self, k: int) -> np.ndarray:
        return self.coefficients[k]

    def is_zero(self) -> bool:
        return is_zero(self.coefficients)

    def __add__(self, other: "SuperBilinearForm") -> "SuperBilinearForm":
        return SuperBilinearForm(self.left, self.right, self.target, self.coefficients + other.coefficients)

    def scaled(self, c) -> "SuperBilinearForm":
        return SuperBilinearForm(self.left, self.right, self.target, self.coefficients * Q(c), self.symmetry)

    def to_dict(self) -> dict:
        return {"target": list(self.target.labels), "symmetry": self.symmetry,
                "coefficients": [[[fmt_rational(x) for x in row] for row in block] for block in self.coefficients]}


def scalar_space() -> GradedSpace:
    return GradedSpace.even(["1"])


def check_equivariance(form: SuperBilinearForm, left_actions: Sequence, right_actions: Sequence,
                       target_actions: Sequence, parities: Optional[Sequence[int]] = None,
                       labels: Optional[Sequence[str]] = None) -> CheckReport:
    """x·B(s,t) = B(x·s, t) + (−1)^{|x||s|} B(s, x·t) for each generator x and basis pair."""
    if not (len(left_actions) == len(right_actions) == len(target_actions)):
        raise DimensionMismatchError("one action per generator on each of left, right and target")
    parities = parities or [0] * len(left_actions)
    labels = labels or [f"x{n}" for n in range(len(left_actions))]
    c = form.coefficients
    report = CheckReport("form-equivariance")
    for x, (al, ar, at, px) in enumerate(zip(left_actions, right_actions, target_actions, parities)):
        al, ar, at = (np.asarray(a, dtype=object) for a in (al, ar, at))
        for i in range(form.left.dim):
            for j in range(form.right.dim):
                lhs = at.dot(c[:, i, j])
                rhs = c[:, :, j].dot(al[:, i])
                sign = -1 if px and form.left.parities[i] else 1
                rhs = rhs + c[:, i, :].dot(ar[:, j]) * sign
                report.record(is_zero(lhs - rhs), {"generator": labels[x],
                                                   "pair": [form.left.labels[i], form.right.labels[j]]})
    return report
