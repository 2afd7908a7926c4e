"""Lifting algebra automorphisms to group automorphisms on nilpotent matrix models.

On a simply connected nilpotent group ``exp`` is a bijection, so
``psi(g) = exp(A log g)`` is the unique automorphism with ``(d psi)_e = A``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import AutomorphismError, PreconditionError
from ..groups import MatrixGroupModel, left_translate
from ..lie import InvariantVectorField
from .automorphisms import AutomorphismMatrix

HOMOMORPHISM_TOL = 1e-9
DIFFERENTIAL_TOL = 1e-6
FIELD_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    """``g -> exp(A log g)`` on a model with a logarithm.

    Build through ``lift_to_group``; direct construction skips every check
    and exists for negative controls.
    """

    model: MatrixGroupModel
    algebra_map: np.ndarray
    homomorphism_residual: float = float("nan")
    differential_residual: float = float("nan")

    def __call__(self, g) -> np.ndarray:
        return self.model.exp(self.algebra_map @ self.model.log(g))


def homomorphism_residual(psi: GroupAutomorphism, pairs: int = 50, seed=0) -> float:
    rng = np.random.default_rng(seed)
    model = psi.model
    worst = 0.0
    for _ in range(pairs):
        g = model.random_element(rng)
        h = model.random_element(rng)
        worst = max(worst, float(np.max(np.abs(psi(g @ h) - psi(g) @ psi(h)))))
    return worst


def differential_at_identity(psi: GroupAutomorphism, eps: float = 1e-5) -> np.ndarray:
    """``(d psi)_e`` in algebra coordinates, by central differences along ``exp(t e_i)``."""
    model = psi.model
    n = model.dim
    cols = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = eps
        diff = (psi(model.exp(e)) - psi(model.exp(-e))) / (2 * eps)
        cols.append(model.coords_of(diff, tol=1e-6))
    return np.array(cols).T


def lift_to_group(model: MatrixGroupModel, A, pairs: int = 50, seed=0) -> GroupAutomorphism:
    """Lift ``A`` and certify the result is a homomorphism with differential ``A``.

    Raises ``AutomorphismError`` (with ``residual``) when the homomorphism
    test fails, which happens exactly when ``A`` is not an automorphism.
    """
    if not model.log_available:
        raise PreconditionError(f"model {model.name!r} has no logarithm; cannot lift")
    mat = A.mat if isinstance(A, AutomorphismMatrix) else np.asarray(A, dtype=float)
    psi = GroupAutomorphism(model, mat)
    hres = homomorphism_residual(psi, pairs, seed)
    if hres > HOMOMORPHISM_TOL:
        raise AutomorphismError(
            f"lifted map is not a homomorphism (residual {hres:.3e})", residual=hres)
    dres = float(np.max(np.abs(differential_at_identity(psi) - mat)))
    if dres > DIFFERENTIAL_TOL:
        raise AutomorphismError(
            f"differential of the lift differs from A (residual {dres:.3e})", residual=dres)
    return GroupAutomorphism(model, mat, hres, dres)


def commutation_check(model: MatrixGroupModel, psi: GroupAutomorphism,
                      pairs: int = 50, seed=0) -> float:
    """Max of ``|psi(L_g h) - L_{psi(g)} psi(h)|`` over seeded pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        g = model.random_element(rng)
        h = model.random_element(rng)
        lhs = psi(left_translate(model, g, h))
        rhs = left_translate(model, psi(g), psi(h))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def field_invariance_check(model: MatrixGroupModel, psi: GroupAutomorphism, x,
                           points: int = 50, seed=0) -> float:
    """Max of ``|d psi_g(X_g) - X_{psi(g)}|`` with ``X_g = g X_e``.

    ``d psi_g(X_g)`` is the central difference of ``psi(g exp(t X_e))`` at
    ``t = 0`` with step ``1e-5 * |g|``. The identity is always included.
    """
    if not model.log_available:
        raise PreconditionError(f"model {model.name!r} has no logarithm")
    if isinstance(x, InvariantVectorField):
        x = x.coords
    x = np.asarray(x, dtype=float)
    Xe = model.to_matrix(x)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(points):
        g = model.identity if k == 0 else model.random_element(rng)
        eps = 1e-5 * float(np.max(np.abs(g)))
        dpsi = (psi(g @ model.exp(eps * x)) - psi(g @ model.exp(-eps * x))) / (2 * eps)
        target = psi(g) @ Xe
        worst = max(worst, float(np.max(np.abs(dpsi - target))))
    return worst
