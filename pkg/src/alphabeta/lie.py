"""Lie algebras by structure constants, inner products by Gram matrices.

Basis indices are 0-based in code. A structure array ``C`` has shape
``(n, n, n)`` with ``[e_i, e_j] = sum_k C[k, i, j] e_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import DimensionError, InnerProductError, LieAlgebraError


def _antisymmetrize(C):
    """Keep the i<j slots of ``C`` and mirror them; diagonal set to zero."""
    n = C.shape[0]
    out = np.zeros_like(C, dtype=float)
    iu, ju = np.triu_indices(n, k=1)
    out[:, iu, ju] = C[:, iu, ju]
    out[:, ju, iu] = -C[:, iu, ju]
    return out


def jacobi_tolerance(C) -> float:
    C = np.asarray(C, dtype=float)
    return 1e-12 * (1.0 + (np.max(np.abs(C)) if C.size else 0.0))


def _jacobi_residual(C) -> float:
    # [[e_i,e_j],e_l] has k-component sum_m C[m,i,j] C[k,m,l]
    C = np.asarray(C, dtype=float)
    if C.shape[0] == 0:
        return 0.0
    t = np.einsum("mij,kml->kijl", C, C)
    # J(i,j,l) = T(i,j,l) + T(j,l,i) + T(l,i,j)
    J = t + np.transpose(t, (0, 3, 1, 2)) + np.transpose(t, (0, 2, 3, 1))
    return float(np.max(np.abs(J)))


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """Finite-dimensional real Lie algebra given by structure constants."""

    dim: int
    structure: np.ndarray
    name: Optional[str] = None
    jacobi_residual: float = field(init=False, default=0.0)

    def __init__(self, structure, name=None, check=True):
        C = np.array(structure, dtype=float)
        if C.ndim != 3 or not (C.shape[0] == C.shape[1] == C.shape[2]):
            raise DimensionError(f"structure must have shape (n, n, n), got {C.shape}")
        if C.shape[0] < 1:
            raise DimensionError("dimension must be positive")
        if not np.all(np.isfinite(C)):
            raise LieAlgebraError("structure constants must be finite")
        C = _antisymmetrize(C)
        C.setflags(write=False)
        res = _jacobi_residual(C)
        object.__setattr__(self, "dim", C.shape[0])
        object.__setattr__(self, "structure", C)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "jacobi_residual", res)
        if check and res > jacobi_tolerance(C):
            raise LieAlgebraError(
                f"Jacobi identity violated (residual {res:.3e})", residual=res)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping, name=None, check=True):
        """Build from ``{(i, j): vector}`` with ``[e_i, e_j] = vector`` (0-based)."""
        C = np.zeros((dim, dim, dim))
        for (i, j), vec in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"bracket index ({i}, {j}) out of range for dim {dim}")
            if i == j:
                raise LieAlgebraError(f"[e_{i}, e_{i}] must vanish")
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (dim,):
                raise DimensionError(f"bracket vector for ({i}, {j}) must have length {dim}")
            if i < j:
                C[:, i, j] = vec
            else:
                C[:, j, i] = -vec
        return cls(C, name=name, check=check)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x = [x, .]`` in the basis."""
        x = _as_vector(x, self.dim)
        return np.einsum("kij,i->kj", self.structure, x)


def _as_vector(x, n) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def bracket(alg: LieAlgebraSpec, x, y) -> np.ndarray:
    x = _as_vector(x, alg.dim)
    y = _as_vector(y, alg.dim)
    return np.einsum("kij,i,j->k", alg.structure, x, y)


def validate_jacobi(alg) -> float:
    """Max Jacobi residual over all basis triples.

    Accepts a ``LieAlgebraSpec`` or a raw ``(n, n, n)`` array; raw arrays
    are not antisymmetrized, so corrupted data shows up as a residual.
    """
    if isinstance(alg, LieAlgebraSpec):
        return alg.jacobi_residual
    return _jacobi_residual(alg)


@dataclass(frozen=True, eq=False)
class InnerProduct:
    """Left-invariant Riemannian metric, stored as its Gram matrix at e."""

    gram: np.ndarray

    def __init__(self, gram):
        g = np.array(gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"gram must be square, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InnerProductError("gram entries must be finite")
        if np.max(np.abs(g - g.T), initial=0.0) != 0.0:
            raise InnerProductError("gram matrix is not symmetric")
        w = np.linalg.eigvalsh(g)
        if w[0] <= 1e-12 * w[-1] or w[-1] <= 0:
            raise InnerProductError(
                f"gram matrix is not positive definite (eigenvalues {w[0]:.3e}..{w[-1]:.3e})")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def scaled(self, factor: float) -> "InnerProduct":
        return InnerProduct(self.gram * factor)


def inner(ip: InnerProduct, x, y) -> float:
    x = _as_vector(x, ip.dim)
    y = _as_vector(y, ip.dim)
    return float(x @ ip.gram @ y)


def norm(ip: InnerProduct, x) -> float:
    x = _as_vector(x, ip.dim)
    m = float(np.max(np.abs(x)))
    if m == 0.0:
        return 0.0
    # factor out the scale so the quadratic form cannot underflow or overflow
    u = x / m
    return m * float(np.sqrt(max(u @ ip.gram @ u, 0.0)))


@dataclass(frozen=True, eq=False)
class InvariantVectorField:
    """Left-invariant field X, stored as its value at the identity.

    The dual 1-form is ``beta(y) = <X, y>``.
    """

    coords: np.ndarray

    def __init__(self, coords):
        x = np.array(coords, dtype=float)
        if x.ndim != 1:
            raise DimensionError("field coordinates must be a vector")
        if not np.all(np.isfinite(x)):
            raise ValueError("field coordinates must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "coords", x)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def beta(self, ip: InnerProduct, y) -> float:
        return inner(ip, self.coords, y)


def _structure(n, brackets):
    C = np.zeros((n, n, n))
    for (i, j), vec in brackets.items():
        C[:, i, j] = vec
    return C


def heisenberg3() -> LieAlgebraSpec:
    return LieAlgebraSpec(_structure(3, {(0, 1): [0, 0, 1]}), name="heisenberg3")


def abelian(n: int) -> LieAlgebraSpec:
    return LieAlgebraSpec(np.zeros((n, n, n)), name=f"abelian{n}")


def so3() -> LieAlgebraSpec:
    return LieAlgebraSpec(
        _structure(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]}),
        name="so3")


def aff1() -> LieAlgebraSpec:
    """Two-dimensional non-abelian algebra, ``[e1, e2] = e2``."""
    return LieAlgebraSpec(_structure(2, {(0, 1): [0, 1]}), name="aff1")


CATALOG = {
    "heisenberg3": heisenberg3,
    "abelian3": lambda: abelian(3),
    "so3": so3,
    "aff1": aff1,
}


def catalog_algebra(name: str) -> LieAlgebraSpec:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown catalog algebra {name!r}; known: {sorted(CATALOG)}") from None
