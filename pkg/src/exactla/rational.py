from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple, Union
import numpy as np

Scalar = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def Q(value) -> Fraction:
    """Coerce ints, Fractions, 'p/q' strings and domain elements to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def fmt_rational(value) -> str:
    q = Q(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if "." in text or "e" in text.lower():
        raise ValueError(f"rational literal {text!r} must be an integer or p/q")
    return Fraction(text)


##matrices are numpy object arrays holding Fractions
def qzeros(rows: int, cols: int) -> np.ndarray:
    return np.full((rows, cols), ZERO, dtype=object)


def qeye(n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def qarray(rows: Sequence[Sequence]) -> np.ndarray:
    data = [[Q(x) for x in row] for row in rows]
    if not data:
        return qzeros(0, 0)
    out = qzeros(len(data), len(data[0]))
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def qvector(values: Iterable) -> np.ndarray:
    vals = [Q(x) for x in values]
    out = np.full(len(vals), ZERO, dtype=object)
    for i, x in enumerate(vals):
        out[i] = x
    return out


def as_qmatrix(m) -> np.ndarray:
    """Integer or object matrix -> Fraction object matrix."""
    arr = np.asarray(m)
    out = qzeros(*arr.shape)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Q(int(x)) if isinstance(x, (np.integer,)) else Q(x)
    return out


def is_zero(m) -> bool:
    arr = np.asarray(m, dtype=object)
    return all(x == 0 for x in arr.flat)


def nonzero_count(m) -> int:
    return sum(1 for x in np.asarray(m, dtype=object).flat if x != 0)


def abs_sum(m) -> Fraction:
    return sum((abs(Q(x)) for x in np.asarray(m, dtype=object).flat), ZERO)


def commutator(a: np.ndarray, b: np.ndarray, sign: int = 1) -> np.ndarray:
    """a·b − sign·b·a; sign = (−1)^{|a||b|} gives the super commutator."""
    return a.dot(b) - b.dot(a) * sign


def matrix_to_strings(m) -> List[List[str]]:
    return [[fmt_rational(x) for x in row] for row in np.asarray(m, dtype=object)]


def matrix_from_strings(rows) -> np.ndarray:
    return qarray([[parse_rational(str(x)) for x in row] for row in rows])


##sign utility shared by the coalgebra and tensor code
def koszul_sign(parities: Sequence[int], order: Sequence[int]) -> int:
    """Sign picked up when homogeneous items with `parities` are rearranged into `order`."""
    sign = 1
    for a, b in combinations(range(len(order)), 2):
        if order[a] > order[b] and parities[order[a]] and parities[order[b]]:
            sign = -sign
    return sign


def permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    for a, b in combinations(range(len(order)), 2):
        if order[a] > order[b]:
            sign = -sign
    return sign


def sort_with_sign(indices: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort a tuple of anticommuting indices; sign 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    order = sorted(range(len(indices)), key=lambda k: indices[k])
    return permutation_sign(order), tuple(indices[k] for k in order)
