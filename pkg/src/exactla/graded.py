from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.exactla.errors import DimensionMismatchError, ParityError
from src.exactla.rational import Q, ZERO, as_qmatrix, fmt_rational, qzeros

logger = logging.getLogger(__name__)

EVEN, ODD = 0, 1
PARITY_NAMES = {EVEN: "even", ODD: "odd"}
PARITY_CODES = {"even": EVEN, "odd": ODD}


@dataclass(frozen=True)
class GradedSpace:
    labels: Tuple[str, ...]
    parities: Tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise DimensionMismatchError(
                f"{len(self.labels)} labels but {len(self.parities)} parities")
        if len(set(self.labels)) != len(self.labels):
            dupes = sorted({x for x in self.labels if self.labels.count(x) > 1})
            raise ValueError(f"basis labels must be unique, repeated: {dupes}")
        for lab, p in zip(self.labels, self.parities):
            if p not in (EVEN, ODD):
                raise ParityError(f"basis element {lab} has parity {p!r}")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, int]]) -> "GradedSpace":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def even(cls, labels: Sequence[str]) -> "GradedSpace":
        return cls(tuple(labels), tuple(EVEN for _ in labels))

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def sdim(self) -> Tuple[int, int]:
        odd = sum(self.parities)
        return (self.dim - odd, odd)

    def sdim_str(self) -> str:
        return f"{self.sdim[0]}|{self.sdim[1]}"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis element {label!r}") from None

    def dual(self) -> "GradedSpace":
        return GradedSpace(tuple(f"{x}*" for x in self.labels), self.parities)


@dataclass
class GradedMap:
    domain: GradedSpace
    codomain: GradedSpace
    matrix: np.ndarray
    parity: int = EVEN

    def __post_init__(self):
        self.matrix = as_qmatrix(self.matrix)
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} does not fit "
                f"{self.domain.dim} -> {self.codomain.dim}")
        for (i, j), x in np.ndenumerate(self.matrix):
            if x != 0 and (self.codomain.parities[i] ^ self.domain.parities[j]) != self.parity:
                raise ParityError(
                    f"{PARITY_NAMES[self.parity]} map sends {self.domain.labels[j]} "
                    f"to {self.codomain.labels[i]} (entry {fmt_rational(x)})")

    @classmethod
    def on(cls, space: GradedSpace, matrix, parity: int = EVEN) -> "GradedMap":
        return cls(space, space, matrix, parity)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        if other.codomain != self.domain:
            raise DimensionMismatchError("composition of maps with incompatible spaces")
        return GradedMap(other.domain, self.codomain, self.matrix.dot(other.matrix),
                         self.parity ^ other.parity)

    def apply(self, vector) -> np.ndarray:
        vec = np.asarray(vector, dtype=object)
        if vec.shape != (self.domain.dim,):
            raise DimensionMismatchError(
                f"vector of length {vec.shape} applied to map on {self.domain.dim}-space")
        return self.matrix.dot(vec)


@dataclass
class TensorElement:
    """Sparse element of V_1 ⊗ ... ⊗ V_k; `dual` flags the covariant factors."""
    factors: Tuple[GradedSpace, ...]
    dual: Tuple[bool, ...]
    coefficients: Dict[Tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.factors) != len(self.dual):
            raise DimensionMismatchError("one variance flag per tensor factor is required")
        clean = {}
        for key, c in self.coefficients.items():
            key = tuple(key)
            if len(key) != len(self.factors):
                raise DimensionMismatchError(f"multi-index {key} has the wrong length")
            c = Q(c)
            if c != 0:
                clean[key] = c
        self.coefficients = clean

    def parity_of(self, key: Tuple[int, ...]) -> int:
        return sum(f.parities[i] for f, i in zip(self.factors, key)) % 2

    @property
    def parities(self) -> set:
        return {self.parity_of(k) for k in self.coefficients}

    def is_zero(self) -> bool:
        return not self.coefficients

    def to_dict(self) -> List[dict]:
        out = []
        for key in sorted(self.coefficients):
            labels = [f.labels[i] + ("*" if d else "") for f, i, d in zip(self.factors, key, self.dual)]
            out.append({"index": labels, "coeff": fmt_rational(self.coefficients[key])})
        return out


def tensor_basis(factors: Sequence[GradedSpace], parity: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Multi-indices of the tensor product, optionally only those of one total parity."""
    keys = product(*[range(f.dim) for f in factors])
    if parity is None:
        return list(keys)
    return [k for k in keys if sum(f.parities[i] for f, i in zip(factors, k)) % 2 == parity]


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = qzeros(n, m)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
