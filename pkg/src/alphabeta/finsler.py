"""Left-invariant (alpha, beta)-metrics on a Lie group.

At the identity, ``F(y) = |y|_g * phi(<X, y>_g / |y|_g)``; elsewhere a
tangent vector is first pulled back to the identity by left translation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, InadmissibleError
from .groups import MatrixGroupModel, pull_to_identity
from .lie import InnerProduct, InvariantVectorField, LieAlgebraSpec, norm
from .phi import PhiFunction, max_admissible_b

ADMISSIBILITY_TOL = 1e-6
HESSIAN_ASYMMETRY = 1e-6
CONVEXITY_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class FinslerStructure:
    alg: LieAlgebraSpec
    ip: InnerProduct
    x_field: InvariantVectorField
    phi: PhiFunction
    b: float
    bound: Optional[float]
    admissible: bool
    allow_inadmissible: bool = False

    @classmethod
    def build(cls, alg, ip, x_field, phi, allow_inadmissible=False):
        """Validate dimensions and the admissibility bound ``|X|_g < b_max(phi)``.

        Non-regular profiles (kropina) have no bound; they are accepted with
        ``admissible = False`` and must be handled by callers accordingly.
        """
        if not isinstance(x_field, InvariantVectorField):
            x_field = InvariantVectorField(x_field)
        if not (alg.dim == ip.dim == x_field.dim):
            raise DimensionError(
                f"dimension mismatch: algebra {alg.dim}, gram {ip.dim}, X {x_field.dim}")
        b = norm(ip, x_field.coords)
        if phi.regular:
            bound = max_admissible_b(phi, ADMISSIBILITY_TOL)
            admissible = b < bound
            if not admissible and not allow_inadmissible:
                raise InadmissibleError(
                    f"|X|_g = {b:.6g} is not below the regularity bound {bound:.6g} "
                    f"for phi = {phi.kind}", norm=b, bound=bound)
        else:
            bound, admissible = None, False
        return cls(alg, ip, x_field, phi, b, bound, admissible, allow_inadmissible)

    @property
    def x(self) -> np.ndarray:
        return self.x_field.coords

    @property
    def usable(self) -> bool:
        """Admissible, explicitly overridden, or a non-regular profile."""
        return self.admissible or self.allow_inadmissible or not self.phi.regular


def minkowski_norms(fs: FinslerStructure, Y) -> np.ndarray:
    """Row-wise ``F`` for an ``(m, n)`` array of nonzero vectors."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if Y.shape[1] != fs.alg.dim:
        raise DimensionError(f"vectors must have length {fs.alg.dim}")
    gY = Y @ fs.ip.gram
    alpha = np.sqrt(np.maximum(np.einsum("ij,ij->i", gY, Y), 0.0))
    if np.any(alpha == 0.0):
        raise ValueError("F is not defined at the zero vector")
    beta = gY @ fs.x
    return alpha * fs.phi(beta / alpha)


def minkowski_norm(fs: FinslerStructure, y) -> float:
    return float(minkowski_norms(fs, y)[0])


def group_norm(fs: FinslerStructure, model: MatrixGroupModel, h, Y_h) -> float:
    """``F(h, Y_h)``, evaluated by pulling ``Y_h`` back to the identity."""
    return minkowski_norm(fs, pull_to_identity(model, h, Y_h))


def _half_f2_hessian(fs, y, h):
    n = y.shape[0]
    I = np.eye(n)
    f0 = minkowski_norm(fs, y) ** 2
    pts = []
    for i in range(n):
        for j in range(n):
            if i == j:
                pts += [y + h * I[i], y - h * I[i]]
            else:
                # step h along i and 2h along j, so (i, j) and (j, i) use
                # different stencils and their mismatch measures the error
                pts += [y + h * I[i] + 2 * h * I[j], y + h * I[i] - 2 * h * I[j],
                        y - h * I[i] + 2 * h * I[j], y - h * I[i] - 2 * h * I[j]]
    vals = iter(minkowski_norms(fs, np.array(pts)) ** 2)
    H = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                fp, fm = next(vals), next(vals)
                H[i, i] = (fp - 2.0 * f0 + fm) / h**2
            else:
                fpp, fpm, fmp, fmm = next(vals), next(vals), next(vals), next(vals)
                H[i, j] = (fpp - fpm - fmp + fmm) / (8.0 * h**2)
    return 0.5 * H


def fundamental_tensor(fs: FinslerStructure, y, step: Optional[float] = None,
                       return_asymmetry: bool = False):
    """``g_ij(y) = 1/2 d^2(F^2)/dy_i dy_j`` by Richardson-extrapolated central differences.

    Default base step is ``eps**0.25 * (1 + |y|)``. The raw estimate is
    symmetrized by averaging; its relative asymmetry must not exceed
    ``HESSIAN_ASYMMETRY``.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (fs.alg.dim,):
        raise DimensionError(f"y must have length {fs.alg.dim}")
    if not np.any(y):
        raise ValueError("fundamental tensor is not defined at the zero vector")
    if step is None:
        step = np.finfo(float).eps ** 0.25 * (1.0 + np.linalg.norm(y))
    if step <= 0:
        raise ValueError("step must be positive")
    G = (4.0 * _half_f2_hessian(fs, y, step / 2) - _half_f2_hessian(fs, y, step)) / 3.0
    scale = max(float(np.max(np.abs(G))), np.finfo(float).tiny)
    asym = float(np.max(np.abs(G - G.T))) / scale
    if asym > HESSIAN_ASYMMETRY:
        raise ArithmeticError(f"finite-difference Hessian asymmetry {asym:.2e} too large")
    G = 0.5 * (G + G.T)
    return (G, asym) if return_asymmetry else G


def is_strongly_convex(fs: FinslerStructure, y, step: Optional[float] = None) -> bool:
    G = fundamental_tensor(fs, y, step)
    w = np.linalg.eigvalsh(G)
    mean_diag = np.trace(G) / G.shape[0]
    return bool(mean_diag > 0 and w[0] > CONVEXITY_FLOOR * mean_diag)


def homogeneity_check(fs: FinslerStructure, y, lam: float) -> float:
    """Relative residual ``|F(lam y) - lam F(y)| / (lam |F(y)|)``."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    y = np.asarray(y, dtype=float)
    Fy = minkowski_norm(fs, y)
    return abs(minkowski_norm(fs, lam * y) - lam * Fy) / (lam * abs(Fy))
