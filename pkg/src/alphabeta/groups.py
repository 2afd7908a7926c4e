"""Concrete matrix models of Lie groups for group-level checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError, GroupElementError
from .lie import LieAlgebraSpec, abelian, heisenberg3, so3

TANGENT_RESIDUAL = 1e-10
BRACKET_FIDELITY = 1e-12


def _nilpotent_exp(N):
    m = N.shape[0]
    out = np.eye(m)
    term = np.eye(m)
    for k in range(1, m):
        term = term @ N / k
        out = out + term
    return out


def _nilpotent_log(g):
    m = g.shape[0]
    N = g - np.eye(m)
    out = np.zeros_like(N)
    power = np.eye(m)
    for k in range(1, m):
        power = power @ N
        out = out + ((-1) ** (k + 1) / k) * power
    return out


def _rodrigues(W):
    w = np.array([W[2, 1], W[0, 2], W[1, 0]])
    theta = np.linalg.norm(w)
    if theta < 1e-8:
        # series to second order keeps full precision here
        return np.eye(3) + W + 0.5 * W @ W
    return (np.eye(3) + (np.sin(theta) / theta) * W
            + ((1 - np.cos(theta)) / theta**2) * W @ W)


def _is_unipotent_upper(g, tol=1e-12):
    return (np.max(np.abs(np.tril(g, -1)), initial=0.0) <= tol
            and np.max(np.abs(np.diag(g) - 1.0)) <= tol)


def _is_positive_diagonal(g, tol=1e-12):
    off = g - np.diag(np.diag(g))
    return np.max(np.abs(off), initial=0.0) <= tol and np.all(np.diag(g) > 0)


def _is_rotation(g, tol=1e-10):
    return (np.max(np.abs(g.T @ g - np.eye(3))) <= tol
            and abs(np.linalg.det(g) - 1.0) <= tol)


@dataclass(frozen=True, eq=False)
class MatrixGroupModel:
    """A matrix group whose Lie algebra is spanned by ``basis_mats``.

    ``basis_mats[i]`` realizes ``e_i`` of ``algebra``. ``log_available`` is
    true only for nilpotent models, where exp and log are finite sums.
    """

    name: str
    algebra: LieAlgebraSpec
    basis_mats: np.ndarray
    log_available: bool
    exp_impl: Callable
    member: Callable
    log_impl: Optional[Callable] = None

    @property
    def embed_dim(self) -> int:
        return self.basis_mats.shape[1]

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.embed_dim)

    @property
    def dim(self) -> int:
        return self.basis_mats.shape[0]

    def bracket_fidelity(self) -> float:
        E = self.basis_mats
        C = self.algebra.structure
        worst = 0.0
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = E[i] @ E[j] - E[j] @ E[i]
                rhs = np.tensordot(C[:, i, j], E, axes=1)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def to_matrix(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise DimensionError(f"expected {self.dim} coordinates, got shape {coords.shape}")
        return np.tensordot(coords, self.basis_mats, axes=1)

    def coords_of(self, Y, tol=TANGENT_RESIDUAL) -> np.ndarray:
        """Basis coordinates of an algebra matrix (least squares, gated)."""
        Y = np.asarray(Y, dtype=float)
        A = self.basis_mats.reshape(self.dim, -1).T
        c, *_ = np.linalg.lstsq(A, Y.ravel(), rcond=None)
        resid = float(np.max(np.abs(A @ c - Y.ravel()), initial=0.0))
        scale = 1.0 + float(np.max(np.abs(Y), initial=0.0))
        if resid > tol * scale:
            raise GroupElementError(
                f"matrix is not in the span of the algebra basis (residual {resid:.3e})",
                residual=resid)
        return c

    def exp(self, coords) -> np.ndarray:
        return self.exp_impl(self.to_matrix(coords))

    def log(self, g) -> np.ndarray:
        """Algebra coordinates of ``log g``."""
        if not self.log_available:
            raise NotImplementedError(f"model {self.name!r} has no logarithm")
        self.check_member(g)
        return self.coords_of(self.log_impl(np.asarray(g, dtype=float)))

    def check_member(self, g) -> None:
        g = np.asarray(g, dtype=float)
        if g.shape != (self.embed_dim, self.embed_dim):
            raise DimensionError(
                f"group element must be {self.embed_dim}x{self.embed_dim}, got {g.shape}")
        if not self.member(g):
            raise GroupElementError(f"matrix is not an element of {self.name}")

    def random_element(self, rng, scale=1.0) -> np.ndarray:
        return self.exp(scale * rng.standard_normal(self.dim))


def left_translate(model: MatrixGroupModel, g, h) -> np.ndarray:
    model.check_member(g)
    model.check_member(h)
    return np.asarray(g) @ np.asarray(h)


def differential_left_translate(model: MatrixGroupModel, g, Y) -> np.ndarray:
    """``(dL_g)(Y) = g Y`` for a tangent matrix ``Y``."""
    model.check_member(g)
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (model.embed_dim, model.embed_dim):
        raise DimensionError(f"tangent matrix must be {model.embed_dim}x{model.embed_dim}")
    return np.asarray(g) @ Y


def pull_to_identity(model: MatrixGroupModel, h, Y_h) -> np.ndarray:
    """Algebra coordinates of ``h^{-1} Y_h``; raises if ``Y_h`` is not tangent at ``h``."""
    model.check_member(h)
    Z = np.linalg.solve(np.asarray(h, dtype=float), np.asarray(Y_h, dtype=float))
    return model.coords_of(Z)


def heisenberg3_model() -> MatrixGroupModel:
    E = np.zeros((3, 3, 3))
    E[0][0, 1] = 1.0
    E[1][1, 2] = 1.0
    E[2][0, 2] = 1.0
    E.setflags(write=False)
    return MatrixGroupModel(
        name="heisenberg3", algebra=heisenberg3(), basis_mats=E, log_available=True,
        exp_impl=_nilpotent_exp, log_impl=_nilpotent_log, member=_is_unipotent_upper)


def abelian_model(n: int) -> MatrixGroupModel:
    E = np.zeros((n, n, n))
    for i in range(n):
        E[i][i, i] = 1.0
    E.setflags(write=False)
    return MatrixGroupModel(
        name=f"abelian{n}", algebra=abelian(n), basis_mats=E, log_available=False,
        exp_impl=lambda Y: np.diag(np.exp(np.diag(Y))), member=_is_positive_diagonal)


def so3_model() -> MatrixGroupModel:
    E = np.zeros((3, 3, 3))
    E[0][2, 1], E[0][1, 2] = 1.0, -1.0
    E[1][0, 2], E[1][2, 0] = 1.0, -1.0
    E[2][1, 0], E[2][0, 1] = 1.0, -1.0
    E.setflags(write=False)
    return MatrixGroupModel(
        name="so3", algebra=so3(), basis_mats=E, log_available=False,
        exp_impl=_rodrigues, member=_is_rotation)


MODELS = {
    "heisenberg3": heisenberg3_model,
    "abelian3": lambda: abelian_model(3),
    "so3": so3_model,
}


def catalog_model(name: str) -> Optional[MatrixGroupModel]:
    factory = MODELS.get(name)
    return factory() if factory else None
