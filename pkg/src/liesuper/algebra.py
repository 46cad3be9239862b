from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import json
import logging
import numpy as np
from tqdm import tqdm

from src.exactla.errors import DimensionMismatchError, ParityError
from src.exactla.graded import EVEN, ODD, PARITY_CODES, PARITY_NAMES, GradedSpace
from src.exactla.rational import Q, ZERO, fmt_rational, qvector, qzeros
from src.exactla.reports import CheckReport

logger = logging.getLogger(__name__)

Sparse = Dict[int, Fraction]


def sparse_add(a: Sparse, b: Sparse, scale=1) -> Sparse:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + scale * v
    return {k: v for k, v in out.items() if v != 0}


def sparse_scale(a: Sparse, c) -> Sparse:
    c = Q(c)
    if c == 0:
        return {}
    return {k: c * v for k, v in a.items()}


class LieSuperalgebra:
    """Lie superalgebra given by structure constants [b_i, b_j] = Σ_k c[i][j][k] b_k.

    The table is entered for unordered pairs; super-antisymmetry fills in the rest.
    """

    def __init__(self, space: GradedSpace, table: Mapping[Tuple[int, int], Mapping[int, object]]):
        self.space = space
        self._table: Dict[Tuple[int, int], Sparse] = {}
        for (i, j), result in table.items():
            self._store(i, j, {k: Q(v) for k, v in result.items() if Q(v) != 0})
        self._ad_cache: Dict[int, np.ndarray] = {}

    def _store(self, i: int, j: int, result: Sparse):
        n = self.dim
        if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in result):
            raise DimensionMismatchError(f"bracket index out of range in [{i},{j}] -> {sorted(result)}")
        p = self.space.parities
        for k in result:
            if p[k] != (p[i] ^ p[j]):
                raise ParityError(
                    f"[{self.labels[i]},{self.labels[j]}] has a component along {self.labels[k]} "
                    f"of the wrong parity")
        sign = -1 if p[i] and p[j] else 1
        mirrored = sparse_scale(result, -sign)
        if i == j and result and sign == 1:
            raise ValueError(f"[{self.labels[i]},{self.labels[i]}] must vanish for an even element")
        for key, value in (((i, j), result), ((j, i), mirrored)):
            old = self._table.get(key)
            if old is not None and old != value and (i, j) != (j, i):
                raise ValueError(
                    f"conflicting brackets given for {self.labels[key[0]]}, {self.labels[key[1]]}")
            if value:
                self._table[key] = value
            else:
                self._table.pop(key, None)

    ##basic data
    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.space.labels

    @property
    def parities(self) -> Tuple[int, ...]:
        return self.space.parities

    def index(self, label: str) -> int:
        return self.space.index(label)

    def even_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p == EVEN]

    def odd_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p == ODD]

    def structure(self, i: int, j: int) -> Sparse:
        return self._table.get((i, j), {})

    def table_items(self) -> List[Tuple[Tuple[int, int], Sparse]]:
        """Nonzero brackets with i <= j, in index order."""
        return sorted((k, v) for k, v in self._table.items() if k[0] <= k[1])

    def is_abelian(self) -> bool:
        return not self._table

    def vec(self, coeffs: Mapping[str, object]) -> np.ndarray:
        out = qvector([0] * self.dim)
        for label, c in coeffs.items():
            out[self.index(label)] += Q(c)
        return out

    def basis_vector(self, i: int) -> np.ndarray:
        out = qvector([0] * self.dim)
        out[i] = Fraction(1)
        return out

    def describe(self, x) -> Dict[str, str]:
        items = x.items() if isinstance(x, dict) else enumerate(np.asarray(x, dtype=object))
        return {self.labels[k]: fmt_rational(v) for k, v in sorted(items) if v != 0}

    ##brackets
    def bracket_sparse(self, x: Sparse, y: Sparse) -> Sparse:
        out: Sparse = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self._table.get((i, j), {}).items():
                    out[k] = out.get(k, ZERO) + a * b * c
        return {k: v for k, v in out.items() if v != 0}

    def bracket(self, x, y) -> np.ndarray:
        xv, yv = np.asarray(x, dtype=object), np.asarray(y, dtype=object)
        if xv.shape != (self.dim,) or yv.shape != (self.dim,):
            raise DimensionMismatchError(f"bracket arguments must have length {self.dim}")
        res = self.bracket_sparse(to_sparse(xv), to_sparse(yv))
        return to_dense(res, self.dim)

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad(b_i) on the whole algebra."""
        if i not in self._ad_cache:
            m = qzeros(self.dim, self.dim)
            for j in range(self.dim):
                for k, c in self._table.get((i, j), {}).items():
                    m[k, j] = c
            self._ad_cache[i] = m
        return self._ad_cache[i]

    def ad_of(self, x) -> np.ndarray:
        m = qzeros(self.dim, self.dim)
        for i, c in to_sparse(np.asarray(x, dtype=object)).items():
            m = m + self.ad(i) * c
        return m

    def parity_of(self, x) -> Optional[int]:
        """Parity of a homogeneous vector, None for zero, ParityError for mixed."""
        ps = {self.parities[k] for k, v in (x.items() if isinstance(x, dict) else enumerate(x)) if v != 0}
        if len(ps) > 1:
            raise ParityError("element is not homogeneous")
        return ps.pop() if ps else None

    def closed_under_bracket(self, indices: Iterable[int]) -> bool:
        idx = set(indices)
        return all(set(self.structure(i, j)) <= idx for i in idx for j in idx)

    def with_perturbation(self, i: int, j: int, k: int, delta=1) -> "LieSuperalgebra":
        table = {key: dict(v) for key, v in self.table_items()}
        key = (min(i, j), max(i, j))
        base = table.setdefault(key, {})
        sign = 1 if key == (i, j) else -(-1 if self.parities[i] and self.parities[j] else 1)
        base[k] = base.get(k, ZERO) + sign * Q(delta)
        return LieSuperalgebra(self.space, table)

    ##serialization
    def to_dict(self) -> dict:
        brackets = []
        for (i, j), res in self.table_items():
            brackets.append({"left": self.labels[i], "right": self.labels[j],
                             "result": [{"basis": self.labels[k], "coeff": fmt_rational(c)}
                                        for k, c in sorted(res.items())]})
        return {"basis": [{"name": l, "parity": PARITY_NAMES[p]} for l, p in zip(self.labels, self.parities)],
                "brackets": brackets}

    @classmethod
    def from_dict(cls, data: dict) -> "LieSuperalgebra":
        try:
            space = GradedSpace.from_pairs([(b["name"], PARITY_CODES[b["parity"]]) for b in data["basis"]])
        except KeyError as e:
            raise ParityError(f"malformed basis entry: missing or unknown {e}") from None
        table: Dict[Tuple[int, int], Sparse] = {}
        for br in data.get("brackets", []):
            i, j = space.index(br["left"]), space.index(br["right"])
            res = {}
            for term in br["result"]:
                k = space.index(term["basis"])
                res[k] = res.get(k, ZERO) + Q(str(term["coeff"]))
            if (j, i) in table and i != j:
                raise ValueError(f"bracket [{br['left']},{br['right']}] listed in both orders")
            table[(i, j)] = res
        return cls(space, table)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieSuperalgebra) and self.space == other.space and self._table == other._table


def to_sparse(x) -> Sparse:
    return {i: Q(v) for i, v in enumerate(x) if v != 0}


def to_dense(x: Sparse, n: int) -> np.ndarray:
    out = qvector([0] * n)
    for k, v in x.items():
        out[k] = v
    return out


def from_brackets(basis: Sequence[Tuple[str, int]], brackets: Mapping[Tuple[str, str], Mapping[str, object]]) -> LieSuperalgebra:
    """Build from label-keyed brackets, e.g. {("h", "e"): {"e": 2}}."""
    space = GradedSpace.from_pairs(basis)
    table = {}
    for (a, b), res in brackets.items():
        table[(space.index(a), space.index(b))] = {space.index(k): v for k, v in res.items()}
    return LieSuperalgebra(space, table)


def general_linear(m: int, n: int) -> LieSuperalgebra:
    """gl(m|n) on the elementary matrices E_ij; the first m indices are even."""
    size = m + n
    deg = [0 if i < m else 1 for i in range(size)]
    pairs = [(i, j) for i in range(size) for j in range(size)]
    ##even elementary matrices first
    pairs.sort(key=lambda ij: (deg[ij[0]] ^ deg[ij[1]], ij))
    labels = [f"E{i + 1}{j + 1}" for i, j in pairs]
    space = GradedSpace(tuple(labels), tuple(deg[i] ^ deg[j] for i, j in pairs))
    pos = {ij: k for k, ij in enumerate(pairs)}
    table = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if a > b:
                continue
            res: Sparse = {}
            if j == k:
                res[pos[(i, l)]] = res.get(pos[(i, l)], ZERO) + 1
            if l == i:
                sign = -1 if (deg[i] ^ deg[j]) and (deg[k] ^ deg[l]) else 1
                res[pos[(k, j)]] = res.get(pos[(k, j)], ZERO) - sign
            res = {key: v for key, v in res.items() if v != 0}
            if res:
                table[(a, b)] = res
    return LieSuperalgebra(space, table)


##checks
def check_super_antisymmetry(g: LieSuperalgebra) -> CheckReport:
    report = CheckReport("super-antisymmetry")
    for i in range(g.dim):
        for j in range(g.dim):
            sign = -1 if g.parities[i] and g.parities[j] else 1
            lhs = g.structure(i, j)
            rhs = sparse_scale(g.structure(j, i), -sign)
            report.record(lhs == rhs, {"triple": [g.labels[i], g.labels[j]]})
    return report


def jacobi_residual(g: LieSuperalgebra, i: int, j: int, k: int) -> Sparse:
    """[x,[y,z]] − [[x,y],z] − (−1)^{|x||y|}[y,[x,z]] on basis elements."""
    x, y, z = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
    sign = -1 if g.parities[i] and g.parities[j] else 1
    res = g.bracket_sparse(x, g.bracket_sparse(y, z))
    res = sparse_add(res, g.bracket_sparse(g.bracket_sparse(x, y), z), -1)
    res = sparse_add(res, g.bracket_sparse(y, g.bracket_sparse(x, z)), -sign)
    return res


def check_super_jacobi(g: LieSuperalgebra, indices: Optional[Sequence[int]] = None,
                       progress: bool = False, sorted_triples: bool = False) -> CheckReport:
    """Jacobi residual on every ordered basis triple; keeps counting after the first failure.

    The residual is super-antisymmetric in its arguments, so `sorted_triples` restricts the run to i <= j <= k.
    """
    report = CheckReport("super-jacobi")
    idx = list(range(g.dim)) if indices is None else list(indices)
    by_parity = {"even-even-even": 0, "even-even-odd": 0, "even-odd-odd": 0, "odd-odd-odd": 0}
    for i in tqdm(idx, desc="jacobi", disable=not progress, leave=False):
        for j in idx:
            if sorted_triples and j < i:
                continue
            for k in idx:
                if sorted_triples and k < j:
                    continue
                res = jacobi_residual(g, i, j, k)
                if res:
                    odd = g.parities[i] + g.parities[j] + g.parities[k]
                    by_parity[["even-even-even", "even-even-odd", "even-odd-odd", "odd-odd-odd"][odd]] += 1
                report.record(not res, {"triple": [g.labels[i], g.labels[j], g.labels[k]],
                                        "residual": g.describe(res)})
    report.details["failures_by_parity"] = by_parity
    logger.info(f"jacobi: {report.checked} triples, {report.failures} failures")
    return report
