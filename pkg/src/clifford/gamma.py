from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple
import logging
import numpy as np

from src.clifford.signature import Signature, algebra_type, clifford_image_dim, spin_dim_expected
from src.exactla.rational import Q, as_qmatrix, fmt_rational, is_zero, qeye, qzeros, sort_with_sign
from src.exactla.reports import CheckReport
from src.exactla.solve import rank

logger = logging.getLogger(__name__)

_E = np.array([[1, 0], [0, -1]])
_F = np.array([[0, 1], [1, 0]])
_J = np.array([[0, -1], [1, 0]])
_I2 = np.eye(2, dtype=int)


def _quaternion_units() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    ##left multiplication by i, j, k on the basis (1, i, j, k)
    li = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    lj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    lk = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    return li, lj, lk


@lru_cache(maxsize=None)
def _plus_module(p: int, q: int) -> Tuple[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...]]:
    """Integer generators of an irreducible module: p squaring to +1, q squaring to −1."""
    if (p, q) == (0, 0):
        return (), ()
    if (p, q) == (1, 0):
        return (np.array([[1]]),), ()
    if (p, q) == (0, 1):
        return (), (_J,)
    if (p, q) == (0, 2):
        li, lj, _ = _quaternion_units()
        return (), (li, lj)
    if (p, q) == (0, 3):
        return (), _quaternion_units()
    if p >= 1 and q >= 1:
        plus, minus = _plus_module(p - 1, q - 1)
        size = plus[0].shape[0] if plus else (minus[0].shape[0] if minus else 1)
        one = np.eye(size, dtype=int)
        return (tuple(np.kron(g, _F) for g in plus) + (np.kron(one, _E),),
                tuple(np.kron(g, _F) for g in minus) + (np.kron(one, _J),))
    if q == 0:
        ##Cl(p,0) from Cl(1,p-1): keep e, replace each f by e·f
        plus, minus = _plus_module(1, p - 1)
        e = plus[0]
        return (e,) + tuple(e.dot(f) for f in minus), ()
    ##Cl(0,q) from Cl(4,q-4) through ω = e1e2e3e4
    plus, minus = _plus_module(4, q - 4)
    omega = plus[0].dot(plus[1]).dot(plus[2]).dot(plus[3])
    return (), tuple(e.dot(omega) for e in plus) + tuple(minus)


@dataclass
class CliffordRep:
    """γ_i γ_j + γ_j γ_i = −2 η_ij Id with η = diag(+1 × r, −1 × s)."""
    signature: Signature
    spin_dim: int
    gammas: List[np.ndarray]

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def eta(self) -> Tuple[int, ...]:
        return self.signature.eta

    def product(self, indices: Sequence[int]) -> np.ndarray:
        out = qeye(self.spin_dim)
        for i in indices:
            out = out.dot(self.gammas[i])
        return out

    def to_dict(self) -> dict:
        return {"signature": [self.signature.r, self.signature.s], "spin_dim": self.spin_dim,
                "gammas": [[[int(x) for x in row] for row in g] for g in self.gammas]}


def build_gamma(sig: Signature) -> CliffordRep:
    if sig.n < 1:
        raise ValueError("a Clifford representation needs r + s >= 1")
    plus, minus = _plus_module(sig.s, sig.r)
    mats = list(minus) + list(plus)
    size = mats[0].shape[0]
    rep = CliffordRep(sig, size, [as_qmatrix(m) for m in mats])
    if size != spin_dim_expected(sig):
        raise ValueError(f"constructed module of dimension {size} for {sig}, expected {spin_dim_expected(sig)}")
    logger.debug(f"gamma matrices for {sig}: spin module of dimension {size}")
    return rep


def check_clifford_relation(rep: CliffordRep) -> CheckReport:
    report = CheckReport("clifford-relation")
    eye = qeye(rep.spin_dim)
    for i in range(rep.n):
        for j in range(rep.n):
            anti = rep.gammas[i].dot(rep.gammas[j]) + rep.gammas[j].dot(rep.gammas[i])
            want = eye * (-2 * rep.eta[i]) if i == j else eye * 0
            report.record(is_zero(anti - want), {"pair": [i, j]})
    return report


def certify_irreducible(rep: CliffordRep) -> CheckReport:
    """Spin module dimension is minimal and the γ's generate the full simple factor."""
    report = CheckReport("irreducible")
    products = []
    for k in range(rep.n + 1):
        for idx in combinations(range(rep.n), k):
            products.append(rep.product(idx).flatten())
    span = rank(np.array(products, dtype=object))
    report.details.update({"span_dim": span, "expected_span_dim": clifford_image_dim(rep.signature),
                           "spin_dim": rep.spin_dim, "expected_spin_dim": spin_dim_expected(rep.signature)})
    report.record(span == clifford_image_dim(rep.signature), {"span_dim": span})
    report.record(rep.spin_dim == spin_dim_expected(rep.signature), {"spin_dim": rep.spin_dim})
    return report


def clifford_of_multivector(rep: CliffordRep, components: Dict[Tuple[int, ...], object]) -> np.ndarray:
    """Clifford action of Σ c_I e_I, each e_I the antisymmetrized product of orthonormal vectors."""
    out = qzeros(rep.spin_dim, rep.spin_dim)
    for idx, c in components.items():
        c = Q(c)
        if c == 0:
            continue
        sign, ordered = sort_with_sign(idx)
        if sign == 0:
            continue
        out = out + rep.product(ordered) * (sign * c)
    return out


def volume_element(rep: CliffordRep) -> np.ndarray:
    return rep.product(range(rep.n))


def describe_rep(rep: CliffordRep) -> dict:
    return {"signature": str(rep.signature), "class": rep.signature.table_class,
            "algebra": algebra_type(rep.signature), "spin_dim": rep.spin_dim,
            "volume_square": fmt_rational(volume_element(rep).dot(volume_element(rep))[0, 0])}
