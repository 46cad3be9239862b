from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

from src.exactla.errors import ParityError
from src.exactla.rational import ZERO, fmt_rational, koszul_sign
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra, Sparse, to_sparse
from src.pbw.enveloping import PBWAlgebra, Terms, UEAElement, Word, add_terms
from src.pbw.exterior import all_wedges
from src.pbw.koszul import nested_ad_sum
from src.pbw.series import series_coefficient

logger = logging.getLogger(__name__)


class SymmetricAlgebra:
    """Super-symmetric algebra S(g); monomials are words sorted by PBW rank, odd letters at most once."""

    def __init__(self, alg: PBWAlgebra):
        self.alg = alg
        self.g = alg.g

    def parity(self, word: Sequence[int]) -> int:
        return self.alg.word_parity(word)

    def normalize(self, word: Sequence[int]) -> Tuple[int, Word]:
        word = tuple(word)
        order = sorted(range(len(word)), key=lambda k: (self.alg.rank[word[k]], k))
        ordered = tuple(word[k] for k in order)
        for x, y in zip(ordered, ordered[1:]):
            if x == y and self.g.parities[x]:
                return 0, ()
        return koszul_sign([self.g.parities[b] for b in word], order), ordered

    def multiply(self, left: Terms, right: Terms) -> Terms:
        out: Terms = {}
        for w1, c1 in left.items():
            for w2, c2 in right.items():
                sign, w = self.normalize(w1 + w2)
                if sign:
                    add_terms(out, {w: Fraction(1)}, sign * c1 * c2)
        return out

    def coproduct(self, word: Word) -> List[Tuple[int, Word, Word]]:
        """Shuffle coproduct Σ ± b_(1) ⊗ b_(2); repeated even letters give repeated terms."""
        parities = [self.g.parities[b] for b in word]
        out = []
        n = len(word)
        for k in range(n + 1):
            for left in combinations(range(n), k):
                right = tuple(i for i in range(n) if i not in left)
                order = list(left) + list(right)
                out.append((koszul_sign(parities, order), tuple(word[i] for i in left),
                            tuple(word[i] for i in right)))
        return out

    def symmetrize(self, terms: Terms) -> UEAElement:
        """γ: b_1…b_n ↦ (1/n!) Σ_σ K(σ) b_σ(1)…b_σ(n) in U(g)."""
        out: Terms = {}
        for w, c in terms.items():
            parities = [self.g.parities[b] for b in w]
            scale = c / factorial(len(w))
            for perm in permutations(range(len(w))):
                add_terms(out, self.alg._normal(tuple(w[i] for i in perm)), scale * koszul_sign(parities, perm))
        return UEAElement(self.alg, out)

    def desymmetrize(self, u: UEAElement) -> Terms:
        """Inverse of symmetrize; γ(w) = w + lower filtration degree."""
        rest = UEAElement(self.alg, dict(u.terms))
        out: Terms = {}
        while not rest.is_zero():
            top = rest.degree
            word, c = next((w, c) for w, c in rest.sorted_terms() if len(w) == top)
            add_terms(out, {word: Fraction(1)}, c)
            rest = rest - self.symmetrize({word: c})
        return out

    def text(self, terms: Terms) -> str:
        if not terms:
            return "0"
        return str(UEAElement(self.alg, terms))


def phi_c(sym: SymmetricAlgebra, c, x: Sparse, terms: Terms) -> Terms:
    """Φ_c^x(b) = Σ ± (−1)^{|x||b_(1)|} b_(1)·F(b_(2)), with
    F(b) = f_k (−1)^{|x||b|} Σ_σ K(σ) ad b_σ(1)∘…∘ad b_σ(k)(x) and f_k the t^k coefficient of t/(e^{t/c} − 1)."""
    g = sym.g
    px = g.parity_of(x) or 0
    memo: Dict[Tuple[int, ...], Sparse] = {}
    out: Terms = {}
    for word, coef in terms.items():
        for sign, b1, b2 in sym.coproduct(word):
            fk = series_coefficient("f", len(b2), c)
            if fk == 0:
                continue
            s = sign * (-1) ** (px * sym.parity(b1)) * (-1) ** (px * sym.parity(b2))
            value = nested_ad_sum(g, b2, x, memo)
            f_terms = {(k,): fk * v for k, v in value.items()}
            add_terms(out, sym.multiply({b1: Fraction(1)}, f_terms), s * coef)
    return out


def _operator(alg: PBWAlgebra, c: int, x_u: UEAElement, px: int, u: UEAElement, pu: int) -> UEAElement:
    if c == 0:
        return x_u * u - (u * x_u).scaled((-1) ** (px * pu))
    if c == 1:
        return x_u * u
    return (u * x_u).scaled((-1) ** (px * pu))


def phi_c_correspondence(g: LieSuperalgebra, c: int, x, test_set: Optional[Iterable[Sequence[int]]] = None,
                         alg: Optional[PBWAlgebra] = None) -> CheckReport:
    """γ⁻¹∘ad(x)∘γ = Φ_0, γ⁻¹∘L_x∘γ = Φ_1, γ⁻¹∘R_x∘γ = −Φ_{−1} on the monomials of the test set."""
    if c not in (0, 1, -1):
        raise ValueError(f"c must be 0, 1 or -1, got {c}")
    alg = alg or PBWAlgebra(g)
    sym = SymmetricAlgebra(alg)
    if isinstance(x, str):
        x = {g.index(x): Fraction(1)}
    elif isinstance(x, int):
        x = {x: Fraction(1)}
    elif not isinstance(x, dict):
        x = to_sparse(x)
    px = g.parity_of(x)
    if px is None:
        raise ParityError("phi_c needs a nonzero homogeneous element")
    x_u = alg.from_vector(x)
    words = list(test_set) if test_set is not None else all_wedges(g.odd_indices(), len(g.odd_indices()))
    report = CheckReport(f"phi-c{c}")
    for word in words:
        sign, w = sym.normalize(word)
        if not sign:
            continue
        u = sym.symmetrize({w: Fraction(1)})
        lhs = sym.desymmetrize(_operator(alg, c, x_u, px, u, sym.parity(w)))
        rhs = phi_c(sym, c, x, {w: Fraction(1)})
        if c == -1:
            rhs = {k: -v for k, v in rhs.items()}
        report.record(lhs == rhs, {"b": " ".join(g.labels[b] for b in w) or "1",
                                   "lhs": sym.text(lhs), "rhs": sym.text(rhs)})
    report.details["x"] = g.describe(x)
    logger.info(f"phi_c c={c}: {report.checked} monomials, passed={report.passed}")
    return report
