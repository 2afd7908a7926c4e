"""Linear automorphisms of a Lie algebra and the membership tests used on them."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import AutomorphismError, DimensionError
from ..lie import InnerProduct, InvariantVectorField, LieAlgebraSpec
from ..linalg import expm

AUTOMORPHISM_TOL = 1e-9


def automorphism_residual(alg: LieAlgebraSpec, A) -> float:
    """``max_{i<j} |A[e_i,e_j] - [Ae_i, Ae_j]|``."""
    A = np.asarray(A, dtype=float)
    if A.shape != (alg.dim, alg.dim):
        raise DimensionError(f"expected a {alg.dim}x{alg.dim} matrix, got {A.shape}")
    C = alg.structure
    worst = 0.0
    for i, j in combinations(range(alg.dim), 2):
        lhs = A @ C[:, i, j]
        rhs = np.einsum("kab,a,b->k", C, A[:, i], A[:, j])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def orthogonality_residual(ip: InnerProduct, A) -> float:
    A = np.asarray(A, dtype=float)
    g = ip.gram
    return float(np.max(np.abs(A.T @ g @ A - g))) / float(np.max(np.abs(g)))


def _x(x):
    return x.coords if isinstance(x, InvariantVectorField) else np.asarray(x, dtype=float)


def fixing_residual(A, x) -> float:
    x = _x(x)
    return float(np.max(np.abs(np.asarray(A) @ x - x), initial=0.0))


def is_automorphism(alg: LieAlgebraSpec, A, tol: float = AUTOMORPHISM_TOL) -> bool:
    A = np.asarray(A, dtype=float)
    if automorphism_residual(alg, A) > tol:
        return False
    return bool(np.isfinite(np.linalg.cond(A)) and np.linalg.cond(A) < 1e12)


def is_orthogonal(ip: InnerProduct, A, tol: float = AUTOMORPHISM_TOL) -> bool:
    return orthogonality_residual(ip, A) <= tol


def fixes_X(A, x, tol: float = AUTOMORPHISM_TOL) -> bool:
    x = _x(x)
    return fixing_residual(A, x) <= tol * (1.0 + float(np.max(np.abs(x), initial=0.0)))


@dataclass(frozen=True, eq=False)
class AutomorphismMatrix:
    """An invertible ``A`` with ``A[x, y] = [Ax, Ay]``, checked at construction."""

    alg: LieAlgebraSpec
    mat: np.ndarray
    residual: float = 0.0

    def __init__(self, alg, mat, tol=AUTOMORPHISM_TOL):
        mat = np.array(mat, dtype=float)
        res = automorphism_residual(alg, mat)
        if res > tol or not is_automorphism(alg, mat, tol):
            raise AutomorphismError(
                f"matrix is not an automorphism of {alg.name or 'the algebra'} "
                f"(residual {res:.3e})", residual=res)
        mat.setflags(write=False)
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "residual", res)


def exp_derivation(alg: LieAlgebraSpec, D, t: float = 1.0) -> AutomorphismMatrix:
    """``exp(t D)`` as a checked automorphism.

    Raises ``AutomorphismError`` when the result fails the automorphism
    test, which means ``D`` was not a derivation to tolerance.
    """
    D = np.asarray(D, dtype=float)
    if D.shape != (alg.dim, alg.dim):
        raise DimensionError(f"expected a {alg.dim}x{alg.dim} matrix, got {D.shape}")
    return AutomorphismMatrix(alg, expm(t * D))
