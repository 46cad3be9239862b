from itertools import permutations
from typing import List, Optional
import logging
import numpy as np

from src.clifford.gamma import CliffordRep
from src.clifford.spin import SpinLieAlgebra, spin_algebra, wedge_basis, wedge_power_action
from src.exactla.graded import GradedSpace
from src.exactla.rational import HALF, Q, qeye, qzeros, permutation_sign
from src.exactla.solve import equivariant_subspace, joint_kernel, span_basis
from src.liesuper.forms import NONE, SKEW, SYMMETRIC, SuperBilinearForm, check_equivariance, qtensor, scalar_space

logger = logging.getLogger(__name__)

##above this many unknowns the vector-valued forms are assembled from scalar forms and the Schur algebra
DIRECT_SOLVE_LIMIT = 4096


def spinor_space(rep: CliffordRep) -> GradedSpace:
    return GradedSpace.even([f"s{a}" for a in range(rep.spin_dim)])


def vector_space(rep: CliffordRep) -> GradedSpace:
    return GradedSpace.even([f"e{i}" for i in range(rep.n)])


def wedge_space(rep: CliffordRep, k: int) -> GradedSpace:
    if k == 0:
        return scalar_space()
    return GradedSpace.even(["e" + "".join(str(i) for i in I) if rep.n <= 10 else "e" + "_".join(str(i) for i in I)
                             for I in wedge_basis(rep.n, k)])


def schur_algebra(rep: CliffordRep, sp: Optional[SpinLieAlgebra] = None) -> List[np.ndarray]:
    """Basis of the commutant of spin in End(S)."""
    sp = sp or spin_algebra(rep)
    gens = [sp.generators[k] for k in sp.adjacent()]
    return equivariant_subspace(gens, gens, rep.spin_dim, rep.spin_dim)


def _apply_symmetry(mats: List[List[np.ndarray]], symmetry: str) -> List[List[np.ndarray]]:
    """mats[b][k] is the k-th component matrix of candidate b; returns a basis of the requested part."""
    if not mats:
        return []
    ncomp = len(mats[0])
    size = mats[0][0].shape[0]

    def flat(comps):
        return np.concatenate([c.flatten() for c in comps])

    if symmetry == "any":
        vectors = [flat(c) for c in mats]
    elif symmetry in (SYMMETRIC, SKEW):
        sgn = 1 if symmetry == SYMMETRIC else -1
        vectors = [flat([(c + c.T * sgn) * HALF for c in comps]) for comps in mats]
    elif symmetry == "both":
        vectors = [flat([((c + c.T) * HALF - ((c + c.T) * HALF).T) * HALF for c in comps]) for comps in mats]
    else:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    basis = span_basis(vectors, ncomp * size * size)
    return [[v[k * size * size:(k + 1) * size * size].reshape(size, size) for k in range(ncomp)] for v in basis]


def _scalar_forms(rep: CliffordRep, sp: SpinLieAlgebra) -> List[np.ndarray]:
    s = spinor_space(rep)
    gens = [[sp.generators[k]] * 2 for k in sp.adjacent()]
    basis = joint_kernel((s, s), gens, (True, True))
    out = []
    for vec in basis:
        m = qzeros(rep.spin_dim, rep.spin_dim)
        for (a, b), c in vec.items():
            m[a, b] = c
        out.append(m)
    return out


def _vector_forms_direct(rep: CliffordRep, sp: SpinLieAlgebra) -> List[List[np.ndarray]]:
    s, v = spinor_space(rep), vector_space(rep)
    gens = [[sp.vector_action[k], sp.generators[k], sp.generators[k]] for k in sp.adjacent()]
    basis = joint_kernel((v, s, s), gens, (False, True, True))
    out = []
    for vec in basis:
        comps = [qzeros(rep.spin_dim, rep.spin_dim) for _ in range(rep.n)]
        for (k, a, b), c in vec.items():
            comps[k][a, b] = c
        out.append(comps)
    return out


def _vector_forms_from_schur(rep: CliffordRep, sp: SpinLieAlgebra) -> List[List[np.ndarray]]:
    ##Γ_k = η_kk·B·γ_k·C for invariant scalar B and Schur element C
    scalars = _scalar_forms(rep, sp)
    schur = schur_algebra(rep, sp)
    out = []
    for b in scalars:
        for c in schur:
            out.append([b.dot(rep.gammas[k]).dot(c) * rep.eta[k] for k in range(rep.n)])
    return out


def invariant_bilinear_forms(rep: CliffordRep, target: str = "scalar", symmetry: str = "any",
                             method: str = "auto") -> List[SuperBilinearForm]:
    """Basis of spin-equivariant forms S⊗S → ℝ or S⊗S → ℝ^{r,s} with the requested symmetry."""
    sp = spin_algebra(rep)
    s = spinor_space(rep)
    if target == "scalar":
        mats = [[m] for m in _scalar_forms(rep, sp)]
        tspace = scalar_space()
    elif target == "vector":
        unknowns = rep.n * rep.spin_dim ** 2
        if method == "direct" or (method == "auto" and unknowns <= DIRECT_SOLVE_LIMIT):
            mats = _vector_forms_direct(rep, sp)
        else:
            mats = _vector_forms_from_schur(rep, sp)
        tspace = vector_space(rep)
    else:
        raise ValueError(f"target must be 'scalar' or 'vector', got {target!r}")
    flag = symmetry if symmetry in (SYMMETRIC, SKEW) else NONE
    forms = []
    for comps in _apply_symmetry(mats, symmetry):
        coeffs = qtensor((tspace.dim, s.dim, s.dim))
        for k, c in enumerate(comps):
            coeffs[k] = c
        forms.append(SuperBilinearForm(s, s, tspace, coeffs, flag))
    logger.info(f"invariant {target} forms on S{rep.signature} ({symmetry}): {len(forms)}")
    return forms


def gamma_transfer(beta: SuperBilinearForm, k: int, rep: CliffordRep) -> SuperBilinearForm:
    """Λ^k-valued form: components η_I·Σ_π sgn(π) β(γ_{I_π(1)}···γ_{I_π(k)} s, t) in the basis e_I."""
    if not 0 <= k <= rep.n:
        raise ValueError(f"degree {k} outside 0..{rep.n}")
    basis = wedge_basis(rep.n, k)
    b = beta.coefficients[0]
    tspace = wedge_space(rep, k)
    coeffs = qtensor((len(basis), rep.spin_dim, rep.spin_dim))
    for a, I in enumerate(basis):
        m = qzeros(rep.spin_dim, rep.spin_dim)
        for perm in permutations(range(k)):
            m = m + rep.product([I[p] for p in perm]) * permutation_sign(perm)
        eta_i = 1
        for i in I:
            eta_i *= rep.eta[i]
        coeffs[a] = m.T.dot(b) * eta_i
    return SuperBilinearForm(beta.left, beta.right, tspace, coeffs)


def form_equivariance(form: SuperBilinearForm, rep: CliffordRep, k: int = 1):
    """check_equivariance for a Λ^k-valued spinor form under all spin generators."""
    sp = spin_algebra(rep)
    spinor = sp.generators
    target = [wedge_power_action(w, k) if k else qzeros(1, 1) for w in sp.vector_action]
    return check_equivariance(form, spinor, spinor, target, labels=sp.labels)
