"""Derivation algebras and the compact symmetry algebra k' = der_X(g) ∩ so(g, <,>).

Every subspace is represented by a Frobenius-orthonormal list of ``n x n``
matrices. All of them come out of one SVD nullspace routine: first the
full derivation algebra, then linear constraints on coefficients in that
basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from ..lie import InnerProduct, InvariantVectorField, LieAlgebraSpec
from ..linalg import frobenius_orthonormality, nullspace, span_residual

LEIBNIZ_TOL = 1e-9
CLOSURE_TOL = 1e-9
NESTING_TOL = 1e-10
WHICH = ("full", "x_fixing", "skew", "k_prime")


@dataclass(frozen=True, eq=False)
class DerivationBasis:
    mats: np.ndarray
    which: str
    alg: LieAlgebraSpec
    coeffs: Optional[np.ndarray] = None  # coordinates in the parent "full" basis

    def __post_init__(self):
        if self.which not in WHICH:
            raise ValueError(f"unknown basis tag {self.which!r}")

    @property
    def dim(self) -> int:
        return self.mats.shape[0]


def leibniz_operator(alg: LieAlgebraSpec) -> np.ndarray:
    """Matrix of ``D -> (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j])_{i<j}``.

    Columns index ``D`` row-major (``D[a, b]`` at ``a*n + b``); rows are
    (pair, component) with pairs ``i < j`` in lexicographic order.
    """
    n = alg.dim
    C = alg.structure
    pairs = list(combinations(range(n), 2))
    M = np.zeros((len(pairs), n, n, n))
    eye = np.eye(n)
    for p, (i, j) in enumerate(pairs):
        # D[e_i,e_j]_k = sum_l D[k,l] C[l,i,j]
        M[p] += np.einsum("ka,b->kab", eye, C[:, i, j])
        # [De_i, e_j]_k = sum_l D[l,i] C[k,l,j]
        M[p] -= np.einsum("ka,b->kab", C[:, :, j], eye[i])
        # [e_i, De_j]_k = sum_l D[l,j] C[k,i,l]
        M[p] -= np.einsum("ka,b->kab", C[:, i, :], eye[j])
    return M.reshape(len(pairs) * n, n * n)


def leibniz_residual(alg: LieAlgebraSpec, D) -> float:
    D = np.asarray(D, dtype=float)
    C = alg.structure
    worst = 0.0
    for i, j in combinations(range(alg.dim), 2):
        lhs = D @ C[:, i, j]
        rhs = C[:, :, j] @ D[:, i] + C[:, i, :] @ D[:, j]
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def derivation_algebra(alg: LieAlgebraSpec) -> DerivationBasis:
    n = alg.dim
    ns = nullspace(leibniz_operator(alg), scale=float(np.max(np.abs(alg.structure))))
    mats = ns.T.reshape(-1, n, n)
    return DerivationBasis(mats, "full", alg, np.eye(mats.shape[0]))


def _restrict(der: DerivationBasis, constraint: np.ndarray, which: str,
              scale: float) -> DerivationBasis:
    # constraint: rows act on coefficient vectors of der.mats; scale bounds its norm
    if der.which != "full":
        raise ValueError("constraints are applied to the full derivation basis")
    if der.dim == 0:
        return DerivationBasis(der.mats[:0], which, der.alg, np.zeros((0, 0)))
    c = nullspace(constraint, scale=scale).T
    mats = np.einsum("ca,aij->cij", c, der.mats)
    return DerivationBasis(mats, which, der.alg, c)


def _x_scale(x):
    return float(np.linalg.norm(x))


def _skew_scale(ip):
    return 2.0 * float(np.linalg.norm(ip.gram, 2))


def _x_constraint(der, x):
    return np.einsum("aij,j->ia", der.mats, np.asarray(x, dtype=float))


def _skew_constraint(der, ip):
    g = ip.gram
    S = np.einsum("aji,jk->aik", der.mats, g) + np.einsum("ij,ajk->aik", g, der.mats)
    return S.reshape(der.dim, -1).T


def x_fixing_derivations(der: DerivationBasis, x) -> DerivationBasis:
    """Derivations annihilating ``x`` (the infinitesimal stabilizer of X_e)."""
    if isinstance(x, InvariantVectorField):
        x = x.coords
    x = np.asarray(x, dtype=float)
    return _restrict(der, _x_constraint(der, x), "x_fixing", _x_scale(x))


def skew_derivations(der: DerivationBasis, ip: InnerProduct) -> DerivationBasis:
    """Derivations with ``D^T g + g D = 0``."""
    return _restrict(der, _skew_constraint(der, ip), "skew", _skew_scale(ip))


@dataclass(eq=False)
class SymmetryReport:
    dim_der: int
    dim_x_fixing: int
    dim_skew: int
    dim_k_prime: int
    k_prime: DerivationBasis
    full: DerivationBasis
    x_fixing: DerivationBasis
    skew: DerivationBasis
    residuals: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "dims": {"der": self.dim_der, "x_fixing": self.dim_x_fixing,
                     "skew": self.dim_skew, "k_prime": self.dim_k_prime},
            "k_prime_basis": [m.tolist() for m in self.k_prime.mats],
            "residuals": dict(self.residuals),
            "checks": dict(self.checks),
        }


def closure_residual(basis: DerivationBasis) -> float:
    """How far commutators of basis elements fall outside the span."""
    mats = basis.mats
    comms = [a @ b - b @ a for a, b in combinations(mats, 2)]
    if not comms:
        return 0.0
    return span_residual(np.array(comms), mats)


def k_prime(alg: LieAlgebraSpec, ip: InnerProduct, x) -> SymmetryReport:
    """Lie algebra of ``Aut_X(g) ∩ O(g)`` with the invariant checks that certify it.

    The compact-type witness is the largest skew residual ``|D^T g + g D|``
    over the basis: skew generators exponentiate to g-orthogonal, hence
    bounded, one-parameter groups.
    """
    if isinstance(x, InvariantVectorField):
        x = x.coords
    x = np.asarray(x, dtype=float)
    full = derivation_algebra(alg)
    xfix = x_fixing_derivations(full, x)
    skew = skew_derivations(full, ip)
    if full.dim:
        stacked = np.vstack([_x_constraint(full, x), _skew_constraint(full, ip)])
    else:
        stacked = np.zeros((0, 0))
    kp = _restrict(full, stacked, "k_prime", max(_x_scale(x), _skew_scale(ip)))

    g = ip.gram
    all_mats = np.concatenate([full.mats, xfix.mats, skew.mats, kp.mats])
    leib = max((leibniz_residual(alg, D) for D in all_mats), default=0.0)
    skew_wit = max((float(np.max(np.abs(D.T @ g + g @ D))) for D in kp.mats), default=0.0)
    fix_res = max((float(np.max(np.abs(D @ x))) for D in kp.mats), default=0.0)
    ortho = max(frobenius_orthonormality(b.mats) for b in (full, xfix, skew, kp))
    residuals = {
        "leibniz": leib,
        "orthonormality": ortho,
        "closure": closure_residual(kp),
        "nest_k_in_x_fixing": span_residual(kp.mats, xfix.mats),
        "nest_k_in_skew": span_residual(kp.mats, skew.mats),
        "nest_x_fixing_in_full": span_residual(xfix.mats, full.mats),
        "nest_skew_in_full": span_residual(skew.mats, full.mats),
        "compact_type_skew": skew_wit,
        "x_annihilated": fix_res,
    }
    scale = 1.0 + float(np.max(np.abs(g)))
    checks = {
        "leibniz": leib <= LEIBNIZ_TOL,
        "orthonormal": ortho <= NESTING_TOL,
        "closure": residuals["closure"] <= CLOSURE_TOL,
        "nesting": max(residuals[k] for k in residuals if k.startswith("nest")) <= NESTING_TOL,
        "compact_type": skew_wit <= LEIBNIZ_TOL * scale,
        "x_fixed": fix_res <= LEIBNIZ_TOL * (1.0 + float(np.max(np.abs(x), initial=0.0))),
    }
    return SymmetryReport(full.dim, xfix.dim, skew.dim, kp.dim, kp, full, xfix, skew,
                          residuals, checks)
