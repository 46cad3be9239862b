from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
import logging

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = −1/2, the convention of t/(e^t − 1)."""
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if n == 0:
        return Fraction(1)
    total = sum((comb(n + 1, k) * bernoulli(k) for k in range(n)), Fraction(0))
    return -total / (n + 1)


def series_coefficient(name: str, n: int, c=1) -> Fraction:
    """Coefficient of t^n in one of the generating series.

    p: t·coth(t/c)      q: −tanh(t/(2c))      e: t·(coth t − tanh(t/2))
    f: t/(e^{t/c} − 1), with f_0(t) = −t
    """
    c = Fraction(c)
    if n < 0:
        return Fraction(0)
    if name == "p":
        if c == 0:
            raise ValueError("p_c needs c != 0")
        if n == 0:
            return c
        if n % 2:
            return Fraction(0)
        return bernoulli(n) * 2 ** n / (c ** (n - 1) * factorial(n))
    if name == "q":
        if c == 0:
            raise ValueError("q_c needs c != 0")
        if n % 2 == 0:
            return Fraction(0)
        m = n + 1
        return -bernoulli(m) * (2 ** (m + 1) - 2) / (c ** (m - 1) * factorial(m))
    if name == "e":
        if n % 2:
            return Fraction(0)
        return bernoulli(n) * (-2 ** (n + 1) + 2 ** n + 2) / factorial(n)
    if name == "f":
        if c == 0:
            return Fraction(-1) if n == 1 else Fraction(0)
        return bernoulli(n) * c ** (1 - n) / factorial(n)
    raise ValueError(f"unknown series {name!r}")


@dataclass(frozen=True)
class BernoulliSeries:
    """Coefficient table of a formal field: alpha (p_1), theta (−q_1) or epsilon (e)."""
    name: str

    def __post_init__(self):
        if self.name not in ("alpha", "theta", "epsilon"):
            raise ValueError(f"unknown formal series {self.name!r}")

    def coefficient(self, degree: int) -> Fraction:
        if self.name == "alpha":
            return series_coefficient("p", degree, 1)
        if self.name == "theta":
            return -series_coefficient("q", degree, 1)
        return series_coefficient("e", degree)

    @property
    def value_parity(self) -> int:
        """Parity of the values in g: theta lands in g_0, the others in g_1."""
        return 0 if self.name == "theta" else 1


ALPHA = BernoulliSeries("alpha")
THETA = BernoulliSeries("theta")
EPSILON = BernoulliSeries("epsilon")
