from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple
import logging

from src.exactla.errors import DimensionMismatchError
from src.exactla.rational import Q, ZERO, fmt_rational, sort_with_sign

logger = logging.getLogger(__name__)

##(even exponents, increasing odd indices)
Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]


class SuperPolynomial:
    """Polynomial in commuting x^k with an exterior part in anticommuting s^α."""

    def __init__(self, n_even: int, n_odd: int, terms: Optional[Mapping[Monomial, object]] = None):
        self.n_even = n_even
        self.n_odd = n_odd
        self.terms: Dict[Monomial, Fraction] = {}
        for (exps, odd), c in (terms or {}).items():
            if len(exps) != n_even:
                raise DimensionMismatchError(f"monomial {exps} needs {n_even} exponents")
            sign, ordered = sort_with_sign(tuple(odd))
            if sign:
                self._add((tuple(exps), ordered), sign * Q(c))

    def _add(self, key: Monomial, c: Fraction):
        v = self.terms.get(key, ZERO) + c
        if v == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    ##constructors
    @classmethod
    def constant(cls, n_even: int, n_odd: int, c=1) -> "SuperPolynomial":
        return cls(n_even, n_odd, {((0,) * n_even, ()): c})

    @classmethod
    def x(cls, n_even: int, n_odd: int, k: int, c=1) -> "SuperPolynomial":
        exps = [0] * n_even
        exps[k] = 1
        return cls(n_even, n_odd, {(tuple(exps), ()): c})

    @classmethod
    def s(cls, n_even: int, n_odd: int, alpha: int, c=1) -> "SuperPolynomial":
        return cls(n_even, n_odd, {((0,) * n_even, (alpha,)): c})

    def zero_like(self) -> "SuperPolynomial":
        return SuperPolynomial(self.n_even, self.n_odd)

    def _check(self, other: "SuperPolynomial"):
        if (self.n_even, self.n_odd) != (other.n_even, other.n_odd):
            raise DimensionMismatchError("polynomials live in different rings")

    ##arithmetic
    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._check(other)
        out = SuperPolynomial(self.n_even, self.n_odd, self.terms)
        for key, c in other.terms.items():
            out._add(key, c)
        return out

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        return self + other.scaled(-1)

    def __neg__(self) -> "SuperPolynomial":
        return self.scaled(-1)

    def scaled(self, c) -> "SuperPolynomial":
        c = Q(c)
        return SuperPolynomial(self.n_even, self.n_odd, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._check(other)
        out = self.zero_like()
        for (e1, o1), c1 in self.terms.items():
            for (e2, o2), c2 in other.terms.items():
                sign, odd = sort_with_sign(o1 + o2)
                if sign:
                    out._add((tuple(a + b for a, b in zip(e1, e2)), odd), sign * c1 * c2)
        return out

    def __pow__(self, n: int) -> "SuperPolynomial":
        out = SuperPolynomial.constant(self.n_even, self.n_odd)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SuperPolynomial) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def parity(self) -> Optional[int]:
        """Parity of a homogeneous polynomial; None for zero, -1 for mixed."""
        ps = {len(o) % 2 for _, o in self.terms}
        if not ps:
            return None
        return ps.pop() if len(ps) == 1 else -1

    ##calculus
    def d_even(self, k: int) -> "SuperPolynomial":
        out = self.zero_like()
        for (exps, odd), c in self.terms.items():
            if exps[k]:
                lowered = exps[:k] + (exps[k] - 1,) + exps[k + 1:]
                out._add((lowered, odd), c * exps[k])
        return out

    def d_odd(self, alpha: int) -> "SuperPolynomial":
        """Left derivative: ∂/∂s^α moves to s^α through the odd factors before it."""
        out = self.zero_like()
        for (exps, odd), c in self.terms.items():
            if alpha in odd:
                pos = odd.index(alpha)
                out._add((exps, odd[:pos] + odd[pos + 1:]), c * (-1) ** pos)
        return out

    def body(self, point: Optional[Sequence] = None) -> Fraction:
        """Evaluate at an even point with every odd coordinate sent to zero."""
        point = [ZERO] * self.n_even if point is None else [Q(v) for v in point]
        total = ZERO
        for (exps, odd), c in self.terms.items():
            if odd:
                continue
            term = c
            for v, e in zip(point, exps):
                term *= v ** e
            total += term
        return total

    def substitute(self, even_images: Sequence["SuperPolynomial"],
                   odd_images: Sequence["SuperPolynomial"]) -> "SuperPolynomial":
        """Image under the algebra morphism fixed by the images of the generators."""
        if len(even_images) != self.n_even or len(odd_images) != self.n_odd:
            raise DimensionMismatchError("one image per generator is required")
        images = list(even_images) + list(odd_images)
        target = images[0] if images else self
        out = target.zero_like()
        for (exps, odd), c in self.terms.items():
            term = SuperPolynomial.constant(target.n_even, target.n_odd, c)
            for img, e in zip(even_images, exps):
                term = term * img ** e
            for alpha in odd:
                term = term * odd_images[alpha]
            out = out + term
        return out

    ##text
    def monomial_text(self, key: Monomial) -> str:
        exps, odd = key
        pieces = [f"x^{k}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(exps) if e]
        pieces += [f"s^{a}" for a in odd]
        return " ".join(pieces)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms.items(), key=lambda t: (sum(t[0][0]) + len(t[0][1]), t[0])):
            mono = self.monomial_text(key)
            parts.append(f"{fmt_rational(c)} {mono}" if mono else fmt_rational(c))
        return " + ".join(parts)

    __repr__ = __str__
