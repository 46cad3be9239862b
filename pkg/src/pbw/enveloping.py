from fractions import Fraction
from random import Random
from threading import Lock
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging

from src.exactla.rational import HALF, Q, ZERO, fmt_rational
from src.liesuper.algebra import LieSuperalgebra

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Terms = Dict[Word, Fraction]


def add_terms(into: Terms, other: Mapping[Word, Fraction], scale=1) -> Terms:
    for w, c in other.items():
        v = into.get(w, ZERO) + scale * c
        if v == 0:
            into.pop(w, None)
        else:
            into[w] = v
    return into


class PBWAlgebra:
    """U(g) in the PBW basis: even generators first, then odd, each block in input order."""

    def __init__(self, g: LieSuperalgebra):
        self.g = g
        self.order = g.even_indices() + g.odd_indices()
        self.rank = {b: n for n, b in enumerate(self.order)}
        self._cache: Dict[Word, Terms] = {}
        self._lock = Lock()

    def is_odd(self, b: int) -> bool:
        return bool(self.g.parities[b])

    def word_parity(self, word: Sequence[int]) -> int:
        return sum(self.g.parities[b] for b in word) % 2

    def is_normal(self, word: Sequence[int]) -> bool:
        for x, y in zip(word, word[1:]):
            if self.rank[x] > self.rank[y] or (x == y and self.is_odd(x)):
                return False
        return True

    def _rewrite(self, word: Word, pos: int) -> List[Tuple[Fraction, Word]]:
        """One PBW rule applied at word[pos], word[pos+1]."""
        x, y = word[pos], word[pos + 1]
        head, tail = word[:pos], word[pos + 2:]
        out = []
        if x == y:
            ##a·a = ½[a,a] for odd a
            for k, c in self.g.structure(x, x).items():
                out.append((c * HALF, head + (k,) + tail))
            return out
        sign = -1 if self.is_odd(x) and self.is_odd(y) else 1
        out.append((Fraction(sign), head + (y, x) + tail))
        for k, c in self.g.structure(x, y).items():
            out.append((c, head + (k,) + tail))
        return out

    def _first_disorder(self, word: Word) -> Optional[int]:
        for pos in range(len(word) - 1):
            x, y = word[pos], word[pos + 1]
            if self.rank[x] > self.rank[y] or (x == y and self.is_odd(x)):
                return pos
        return None

    def _normal(self, word: Word) -> Terms:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        pos = self._first_disorder(word)
        if pos is None:
            result = {word: Fraction(1)}
        else:
            result: Terms = {}
            for c, w in self._rewrite(word, pos):
                add_terms(result, self._normal(w), c)
        with self._lock:
            self._cache[word] = result
        return result

    def normal_order(self, word: Sequence) -> "UEAElement":
        """PBW normal form of a word given by basis indices or labels."""
        idx = tuple(self.g.index(b) if isinstance(b, str) else int(b) for b in word)
        for b in idx:
            if not 0 <= b < self.g.dim:
                raise KeyError(f"unknown basis element {b!r}")
        return UEAElement(self, dict(self._normal(idx)))

    def normal_order_random(self, word: Sequence[int], rng: Random) -> "UEAElement":
        """Normal form reached by rewriting at randomly chosen positions, without memoization."""
        word = tuple(word)
        bad = [p for p in range(len(word) - 1)
               if self.rank[word[p]] > self.rank[word[p + 1]] or (word[p] == word[p + 1] and self.is_odd(word[p]))]
        if not bad:
            return UEAElement(self, {word: Fraction(1)})
        out: Terms = {}
        for c, w in self._rewrite(word, rng.choice(bad)):
            add_terms(out, self.normal_order_random(w, rng).terms, c)
        return UEAElement(self, out)

    ##constructors
    def one(self) -> "UEAElement":
        return UEAElement(self, {(): Fraction(1)})

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def generator(self, b) -> "UEAElement":
        return self.normal_order([b])

    def from_vector(self, x: Mapping[int, object]) -> "UEAElement":
        return UEAElement(self, {(k,): Q(v) for k, v in x.items() if v != 0})

    def from_terms(self, terms: Mapping[Word, object]) -> "UEAElement":
        out: Terms = {}
        for w, c in terms.items():
            add_terms(out, self._normal(tuple(w)), Q(c))
        return UEAElement(self, out)


class UEAElement:
    """Sparse combination of PBW monomials (stored as sorted basis-index words)."""

    def __init__(self, alg: PBWAlgebra, terms: Terms):
        self.alg = alg
        self.terms = {w: c for w, c in terms.items() if c != 0}

    def __add__(self, other: "UEAElement") -> "UEAElement":
        return UEAElement(self.alg, add_terms(dict(self.terms), other.terms))

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        return UEAElement(self.alg, add_terms(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "UEAElement":
        return self.scaled(-1)

    def scaled(self, c) -> "UEAElement":
        c = Q(c)
        return UEAElement(self.alg, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: "UEAElement") -> "UEAElement":
        out: Terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                add_terms(out, self.alg._normal(w1 + w2), c1 * c2)
        return UEAElement(self.alg, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, UEAElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def homogeneous_parts(self) -> Dict[int, "UEAElement"]:
        parts: Dict[int, Terms] = {}
        for w, c in self.terms.items():
            parts.setdefault(self.alg.word_parity(w), {})[w] = c
        return {p: UEAElement(self.alg, t) for p, t in parts.items()}

    def monomial_text(self, word: Word) -> str:
        if not word:
            return "1"
        labels = self.alg.g.labels
        pieces, k = [], 0
        while k < len(word):
            j = k
            while j < len(word) and word[j] == word[k]:
                j += 1
            pieces.append(labels[word[k]] + (f"^{j - k}" if j - k > 1 else ""))
            k = j
        return " ".join(pieces)

    def sorted_terms(self) -> List[Tuple[Word, Fraction]]:
        rank = self.alg.rank
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), [rank[b] for b in t[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{fmt_rational(c)} {self.monomial_text(w)}" for w, c in self.sorted_terms())

    __repr__ = __str__

    def to_dict(self) -> Dict[str, str]:
        return {self.monomial_text(w): fmt_rational(c) for w, c in self.sorted_terms()}


def antipode(u: UEAElement) -> UEAElement:
    """Anti-automorphism x ↦ −x: reverse each word, sign (−1)^n·(−1)^{m(m−1)/2} for m odd letters."""
    alg = u.alg
    out: Terms = {}
    for w, c in u.terms.items():
        m = sum(alg.g.parities[b] for b in w)
        sign = (-1) ** len(w) * (-1) ** (m * (m - 1) // 2)
        add_terms(out, alg._normal(tuple(reversed(w))), c * sign)
    return UEAElement(alg, out)


def check_confluence(alg: PBWAlgebra, words: Iterable[Sequence[int]], rng: Random) -> Dict[str, object]:
    """Normal forms from random rewriting orders agree with the memoized normal form."""
    checked, mismatches = 0, []
    for w in words:
        checked += 1
        if alg.normal_order_random(w, rng) != alg.normal_order(w):
            mismatches.append([alg.g.labels[b] for b in w])
    return {"checked": checked, "mismatches": mismatches, "passed": not mismatches}


def random_words(alg: PBWAlgebra, count: int, max_length: int, rng: Random) -> List[Word]:
    return [tuple(rng.randrange(alg.g.dim) for _ in range(rng.randint(1, max_length))) for _ in range(count)]
