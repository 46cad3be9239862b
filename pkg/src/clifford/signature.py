from dataclasses import dataclass
from typing import Tuple

##real Clifford algebra type, minimal module dimension exponent offset, Schur algebra dimension by (r - s) mod 8
_CLASS_DATA = {
    1: ("M(C)", 1, 4),
    2: ("M(H)", 2, 8),
    3: ("H+H", 1, 4),
    4: ("M(H)", 2, 8),
    5: ("M(C)", 1, 4),
    6: ("M(R)", 0, 2),
    7: ("R+R", -1, 1),
    0: ("M(R)", 0, 2),
}


@dataclass(frozen=True)
class Signature:
    """ℝ^{r,s}: r basis vectors of norm +1 followed by s of norm −1."""
    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ValueError(f"signature ({self.r},{self.s}) has a negative entry")

    @classmethod
    def parse(cls, text: str) -> "Signature":
        try:
            r, s = (int(x) for x in text.replace(" ", "").split(","))
        except ValueError:
            raise ValueError(f"signature must look like R,S, got {text!r}") from None
        return cls(r, s)

    @property
    def n(self) -> int:
        return self.r + self.s

    @property
    def residue(self) -> int:
        return (self.r - self.s) % 8

    @property
    def table_class(self) -> int:
        """Residue class with 0 reported as 8."""
        return self.residue or 8

    @property
    def eta(self) -> Tuple[int, ...]:
        return (1,) * self.r + (-1,) * self.s

    def __str__(self) -> str:
        return f"({self.r},{self.s})"


def algebra_type(sig: Signature) -> str:
    return _CLASS_DATA[sig.residue][0]


def spin_dim_expected(sig: Signature) -> int:
    """Dimension of an irreducible real Clifford module for the sign convention in gamma.py."""
    if sig.n == 0:
        return 1
    offset = _CLASS_DATA[sig.residue][1]
    return 2 ** ((sig.n + offset) // 2)


def schur_dim_expected(sig: Signature) -> int:
    return _CLASS_DATA[sig.residue][2]


def clifford_image_dim(sig: Signature) -> int:
    """Dimension of the image of Cl(r,s) in End(S) for an irreducible S."""
    if sig.residue in (3, 7):
        return 2 ** (sig.n - 1)
    return 2 ** sig.n
