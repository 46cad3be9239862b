from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.exactla.errors import DimensionMismatchError, ParityError, ShapeError
from src.exactla.rational import ZERO, fmt_rational
from src.exactla.reports import CheckReport
from src.liesuper.algebra import LieSuperalgebra, Sparse, to_sparse
from src.svf.polynomial import SuperPolynomial

logger = logging.getLogger(__name__)

##("x", k) and ("s", α) are coordinate derivations, ("L", A) / ("R", A) the formal left / right
##invariant fields of the isotropy group, A an algebra index
Direction = Tuple[str, int]


@dataclass
class SplitDomain:
    """Chart g = h·(x, s) of a super-translation group H_0 ⋉ (V + S)."""
    algebra: LieSuperalgebra
    h_indices: List[int]
    v_indices: List[int]
    s_indices: List[int]
    gamma: np.ndarray = field(init=False)

    def __post_init__(self):
        g = self.algebra
        v_pos = {b: k for k, b in enumerate(self.v_indices)}
        s_pos = {b: a for a, b in enumerate(self.s_indices)}
        h_set = set(self.h_indices)

        def inside(res: Sparse, allowed) -> bool:
            return set(res) <= set(allowed)

        for b in self.v_indices:
            for c in self.v_indices + self.s_indices:
                if g.structure(b, c):
                    raise ShapeError(f"[{g.labels[b]}, {g.labels[c]}] must vanish on a translation chart")
        for a in self.s_indices:
            for b in self.s_indices:
                if not inside(g.structure(a, b), self.v_indices):
                    raise ShapeError(f"[{g.labels[a]}, {g.labels[b]}] leaves the translations")
        for h in self.h_indices:
            for b, allowed in ([(v, self.v_indices) for v in self.v_indices]
                               + [(s, self.s_indices) for s in self.s_indices]
                               + [(k, self.h_indices) for k in self.h_indices]):
                if not inside(g.structure(h, b), allowed):
                    raise ShapeError(f"[{g.labels[h]}, {g.labels[b]}] breaks the semidirect shape")
        self.v_pos, self.s_pos, self.h_set = v_pos, s_pos, h_set
        n, m = len(self.s_indices), len(self.v_indices)
        gamma = np.full((m, n, n), ZERO, dtype=object)
        for a, sa in enumerate(self.s_indices):
            for b, sb in enumerate(self.s_indices):
                for k, c in g.structure(sa, sb).items():
                    gamma[v_pos[k], a, b] = c
        self.gamma = gamma

    @classmethod
    def from_algebra(cls, g: LieSuperalgebra, translations: Optional[Sequence[str]] = None) -> "SplitDomain":
        """Translations default to the even basis elements commuting with every odd one."""
        odd = g.odd_indices()
        if translations is None:
            v = [b for b in g.even_indices() if all(not g.structure(b, s) for s in odd)]
        else:
            v = [g.index(t) for t in translations]
        h = [b for b in g.even_indices() if b not in v]
        return cls(g, h, v, odd)

    @property
    def n_even(self) -> int:
        return len(self.v_indices)

    @property
    def n_odd(self) -> int:
        return len(self.s_indices)

    def poly(self, terms=None) -> SuperPolynomial:
        return SuperPolynomial(self.n_even, self.n_odd, terms)

    def constant(self, c=1) -> SuperPolynomial:
        return SuperPolynomial.constant(self.n_even, self.n_odd, c)

    def x(self, k: int, c=1) -> SuperPolynomial:
        return SuperPolynomial.x(self.n_even, self.n_odd, k, c)

    def s(self, alpha: int, c=1) -> SuperPolynomial:
        return SuperPolynomial.s(self.n_even, self.n_odd, alpha, c)

    def formal_bracket(self, d1: Direction, d2: Direction) -> Dict[Direction, Fraction]:
        """Left fields of H_0 bracket like the algebra and right fields with the opposite sign; left and right commute.

        Coordinate directions commute with each other.
        """
        if d1[0] != d2[0] or d1[0] not in ("L", "R"):
            return {}
        sign = 1 if d1[0] == "L" else -1
        return {(d1[0], k): sign * c for k, c in self.algebra.structure(d1[1], d2[1]).items()}

    def direction_text(self, d: Direction) -> str:
        kind, i = d
        if kind in ("x", "s"):
            return f"∂/∂{kind}^{i}"
        return f"{kind}({self.algebra.labels[i]})"


def _direction_parity(d: Direction) -> int:
    return 1 if d[0] == "s" else 0


def _apply_direction(d: Direction, f: SuperPolynomial) -> SuperPolynomial:
    if d[0] == "x":
        return f.d_even(d[1])
    if d[0] == "s":
        return f.d_odd(d[1])
    ##isotropy fields do not see the (x, s) coordinates
    return f.zero_like()


class PolySuperField:
    """Σ f_d · d over coordinate derivations and formal isotropy fields, polynomial coefficients."""

    def __init__(self, domain: SplitDomain, components: Optional[Dict[Direction, SuperPolynomial]] = None):
        self.domain = domain
        self.components: Dict[Direction, SuperPolynomial] = {}
        for d, f in (components or {}).items():
            self._add(d, f)
        ps = set()
        for d, f in self.components.items():
            if f.parity == -1:
                raise ParityError(f"coefficient of {domain.direction_text(d)} mixes parities")
            ps.add((f.parity + _direction_parity(d)) % 2)
        if len(ps) > 1:
            raise ParityError("vector field is not homogeneous")
        self.parity: Optional[int] = ps.pop() if ps else None

    def _add(self, d: Direction, f: SuperPolynomial):
        total = self.components.get(d, self.domain.poly()) + f
        if total.is_zero():
            self.components.pop(d, None)
        else:
            self.components[d] = total

    def __add__(self, other: "PolySuperField") -> "PolySuperField":
        out = dict(self.components)
        for d, f in other.components.items():
            out[d] = out[d] + f if d in out else f
        return PolySuperField(self.domain, out)

    def __sub__(self, other: "PolySuperField") -> "PolySuperField":
        return self + other.scaled(-1)

    def scaled(self, c) -> "PolySuperField":
        return PolySuperField(self.domain, {d: f.scaled(c) for d, f in self.components.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, PolySuperField) and self.components == other.components

    def is_zero(self) -> bool:
        return not self.components

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        out = self.domain.poly()
        for d, c in self.components.items():
            out = out + c * _apply_direction(d, f)
        return out

    def __str__(self) -> str:
        if not self.components:
            return "0"
        order = {"x": 0, "s": 1, "L": 2, "R": 3}
        parts = []
        for d, f in sorted(self.components.items(), key=lambda t: (order[t[0][0]], t[0][1])):
            parts.append(f"({f})·{self.domain.direction_text(d)}")
        return " + ".join(parts)

    __repr__ = __str__


def field_bracket(X: PolySuperField, Y: PolySuperField) -> PolySuperField:
    """[X, Y] = X∘Y − (−1)^{|X||Y|} Y∘X expanded by the Leibniz rule."""
    if X.domain is not Y.domain:
        raise DimensionMismatchError("fields live on different domains")
    dom = X.domain
    sign = -1 if (X.parity or 0) and (Y.parity or 0) else 1
    out: Dict[Direction, SuperPolynomial] = {}

    def add(d: Direction, f: SuperPolynomial):
        if not f.is_zero():
            out[d] = out[d] + f if d in out else f

    for di, f in X.components.items():
        for dj, g in Y.components.items():
            add(dj, f * _apply_direction(di, g))
            add(di, (g * _apply_direction(dj, f)).scaled(-sign))
            for dk, c in dom.formal_bracket(di, dj).items():
                add(dk, (f * g).scaled(c))
    return PolySuperField(dom, out)


def _as_sparse(dom: SplitDomain, a) -> Sparse:
    g = dom.algebra
    if isinstance(a, str):
        return {g.index(a): Fraction(1)}
    if isinstance(a, (int, np.integer)):
        return {int(a): Fraction(1)}
    if isinstance(a, dict):
        return dict(a)
    return to_sparse(a)


def _linear_part(dom: SplitDomain, h: int) -> Dict[Direction, SuperPolynomial]:
    """−(ad A)^k_l x^l ∂/∂x^k − a^α_β s^β ∂/∂s^α."""
    g = dom.algebra
    out: Dict[Direction, SuperPolynomial] = {}
    for l, v in enumerate(dom.v_indices):
        for k, c in g.structure(h, v).items():
            d = ("x", dom.v_pos[k])
            out[d] = out.get(d, dom.poly()) + dom.x(l, -c)
    for b, s in enumerate(dom.s_indices):
        for a, c in g.structure(h, s).items():
            d = ("s", dom.s_pos[a])
            out[d] = out.get(d, dom.poly()) + dom.s(b, -c)
    return out


def _spinor_part(dom: SplitDomain, alpha: int, half) -> Dict[Direction, SuperPolynomial]:
    """−∂/∂s^α + half · s^η Γ^k_{αη} ∂/∂x^k."""
    out: Dict[Direction, SuperPolynomial] = {("s", alpha): dom.constant(-1)}
    for k in range(dom.n_even):
        coef = dom.poly()
        for eta in range(dom.n_odd):
            if dom.gamma[k, alpha, eta] != 0:
                coef = coef + dom.s(eta, half * dom.gamma[k, alpha, eta])
        if not coef.is_zero():
            out[("x", k)] = coef
    return out


def _basis_field(dom: SplitDomain, i: int, side: str) -> PolySuperField:
    if i in dom.v_pos:
        return PolySuperField(dom, {("x", dom.v_pos[i]): dom.constant()})
    if i in dom.s_pos:
        half = Fraction(-1, 2) if side == "L" else Fraction(1, 2)
        return PolySuperField(dom, _spinor_part(dom, dom.s_pos[i], half))
    if side == "L":
        comps = _linear_part(dom, i)
        comps[("L", i)] = dom.constant()
        return PolySuperField(dom, comps)
    return PolySuperField(dom, {("R", i): dom.constant()})


def _combine(dom: SplitDomain, a, side: str) -> PolySuperField:
    out = PolySuperField(dom)
    for i, c in _as_sparse(dom, a).items():
        out = out + _basis_field(dom, i, side).scaled(c)
    return out


def left_invariant_field(dom: SplitDomain, a) -> PolySuperField:
    return _combine(dom, a, "L")


def right_invariant_field(dom: SplitDomain, a) -> PolySuperField:
    """Right-invariant field at the identity of the isotropy factor."""
    return _combine(dom, a, "R")


def evaluate_field(X: PolySuperField, point: Optional[Sequence] = None) -> Tuple[Dict[str, Fraction], Dict[str, Fraction]]:
    """Even value (coordinate and isotropy directions) and odd value (odd derivations), odd coordinates set to zero."""
    even, odd = {}, {}
    for d, f in X.components.items():
        v = f.body(point)
        if v == 0:
            continue
        (odd if d[0] == "s" else even)[X.domain.direction_text(d)] = v
    return even, odd


def odd_value_vector(X: PolySuperField, point: Optional[Sequence] = None) -> Sparse:
    """Odd value as an element of g_1 via −∂/∂s^α ≅ s_α."""
    dom = X.domain
    _, odd = evaluate_field(X, point)
    return {dom.s_indices[a]: -odd[f"∂/∂s^{a}"] for a in range(dom.n_odd) if f"∂/∂s^{a}" in odd}


def _pairs(dom: SplitDomain, left_h: bool, right_h: bool) -> List[Tuple[int, int]]:
    g = dom.algebra
    out = []
    for i in range(g.dim):
        for j in range(g.dim):
            hi, hj = i in dom.h_set, j in dom.h_set
            if (hi and not hj and not left_h) or (hj and not hi and not right_h):
                continue
            out.append((i, j))
    return out


def check_left_homomorphism(dom: SplitDomain) -> CheckReport:
    g = dom.algebra
    report = CheckReport("left-invariant-homomorphism")
    for i, j in _pairs(dom, True, True):
        lhs = field_bracket(left_invariant_field(dom, i), left_invariant_field(dom, j))
        rhs = left_invariant_field(dom, g.structure(i, j))
        report.record(lhs == rhs, {"pair": [g.labels[i], g.labels[j]], "lhs": str(lhs), "rhs": str(rhs)})
    return report


def check_right_antihomomorphism(dom: SplitDomain) -> CheckReport:
    """Pairs mixing the isotropy with V + S need the Ad-twist off the identity chart and are skipped."""
    g = dom.algebra
    report = CheckReport("right-invariant-antihomomorphism")
    for i, j in _pairs(dom, False, False):
        lhs = field_bracket(right_invariant_field(dom, i), right_invariant_field(dom, j))
        rhs = right_invariant_field(dom, g.structure(i, j)).scaled(-1)
        report.record(lhs == rhs, {"pair": [g.labels[i], g.labels[j]], "lhs": str(lhs), "rhs": str(rhs)})
    return report


def check_left_right_supercommute(dom: SplitDomain) -> CheckReport:
    g = dom.algebra
    report = CheckReport("left-right-supercommute")
    for i, j in _pairs(dom, False, True):
        res = field_bracket(left_invariant_field(dom, i), right_invariant_field(dom, j))
        report.record(res.is_zero(), {"pair": [g.labels[i], g.labels[j]], "bracket": str(res)})
    return report


def field_table(dom: SplitDomain) -> Dict[str, Dict[str, str]]:
    g = dom.algebra
    return {g.labels[i]: {"left": str(left_invariant_field(dom, i)), "right": str(right_invariant_field(dom, i))}
            for i in range(g.dim)}
