from typing import List
import logging

from src.exactla.graded import TensorElement
from src.exactla.solve import in_span, joint_kernel
from src.liesuper.decomposition import ReductiveDecomposition

logger = logging.getLogger(__name__)


def invariants_in_tensor(d: ReductiveDecomposition, contravariant: int, covariant: int,
                         parity=None) -> List[TensorElement]:
    """Basis of h-invariant tensors in m^{⊗r} ⊗ (m*)^{⊗s}."""
    m = d.m_space
    factors = (m,) * (contravariant + covariant)
    dual = (False,) * contravariant + (True,) * covariant
    g = d.algebra
    generators = [[d.ad_on_m(i)] * len(factors) for i in d.h_indices]
    parities = [g.parities[i] for i in d.h_indices]
    logger.info(f"invariant ({contravariant},{covariant})-tensors on m of dimension {m.sdim_str()}")
    basis = joint_kernel(factors, generators, dual, parities, parity)
    return [TensorElement(factors, dual, vec) for vec in basis]


def tensor_in_span(basis: List[TensorElement], candidate: TensorElement) -> bool:
    keys = sorted({k for t in basis for k in t.coefficients} | set(candidate.coefficients))
    pos = {k: n for n, k in enumerate(keys)}

    def flat(t):
        v = [0] * len(keys)
        for k, c in t.coefficients.items():
            v[pos[k]] = c
        return v

    return in_span([flat(t) for t in basis], flat(candidate))
