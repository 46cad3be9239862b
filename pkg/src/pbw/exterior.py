from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Tuple
import logging

from src.exactla.rational import Q, ZERO, fmt_rational, permutation_sign, sort_with_sign

logger = logging.getLogger(__name__)

Wedge = Tuple[int, ...]


class ExteriorElement:
    """Element of Λ(g_1): strictly increasing tuples of odd basis indices with rational coefficients."""

    def __init__(self, terms: Mapping[Wedge, object] = None):
        self.terms: Dict[Wedge, Fraction] = {}
        for w, c in (terms or {}).items():
            sign, ordered = sort_with_sign(tuple(w))
            if sign:
                v = self.terms.get(ordered, ZERO) + sign * Q(c)
                if v == 0:
                    self.terms.pop(ordered, None)
                else:
                    self.terms[ordered] = v

    @classmethod
    def basis(cls, w: Wedge) -> "ExteriorElement":
        return cls({tuple(w): 1})

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        merged = dict(self.terms)
        for w, c in other.terms.items():
            merged[w] = merged.get(w, ZERO) + c
        return ExteriorElement(merged)

    def scaled(self, c) -> "ExteriorElement":
        return ExteriorElement({w: Q(c) * v for w, v in self.terms.items()})

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        out: Dict[Wedge, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                sign, ordered = sort_with_sign(w1 + w2)
                if sign:
                    out[ordered] = out.get(ordered, ZERO) + sign * c1 * c2
        return ExteriorElement(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExteriorElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def to_dict(self, labels) -> Dict[str, str]:
        return {"∧".join(labels[i] for i in w) or "1": fmt_rational(c) for w, c in sorted(self.terms.items())}


def all_wedges(odd: List[int], max_degree: int) -> List[Wedge]:
    out = []
    for k in range(min(max_degree, len(odd)) + 1):
        out.extend(combinations(sorted(odd), k))
    return out


def wedge_coproduct(w: Wedge) -> List[Tuple[int, Wedge, Wedge]]:
    """Δ(a_1∧…∧a_p) = Σ ± a_I ⊗ a_J over ordered splittings, sign of the shuffle (I, J)."""
    p = len(w)
    out = []
    for k in range(p + 1):
        for left in combinations(range(p), k):
            right = tuple(i for i in range(p) if i not in left)
            sign = permutation_sign(list(left) + list(right))
            out.append((sign, tuple(w[i] for i in left), tuple(w[i] for i in right)))
    return out
