"""Numerical checks of the isometry criterion: an orthogonal automorphism
preserves F exactly when it fixes X. Plus the metric rescaling that makes
any X admissible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import PreconditionError, SingularityError
from ..finsler import ADMISSIBILITY_TOL, FinslerStructure, minkowski_norms
from ..lie import InnerProduct, InvariantVectorField
from ..phi import PhiFunction, max_admissible_b
from .automorphisms import (AUTOMORPHISM_TOL, AutomorphismMatrix, fixes_X,
                            fixing_residual, is_orthogonal)

ISOMETRY_TOL = 1e-8
WITNESS_GAP = 1e-6
CONVERSE_MIN_SHIFT = 1e-6
# |s| below this counts as the singular hyperplane of a profile singular at 0
SINGULAR_BAND = 1e-8


def _mat(A):
    return A.mat if isinstance(A, AutomorphismMatrix) else np.asarray(A, dtype=float)


def sphere_samples(n: int, samples: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Y = rng.standard_normal((samples, n))
    return Y / np.linalg.norm(Y, axis=1, keepdims=True)


def _regular_rows(fs, Y):
    # drop vectors on (or numerically near) a singular hyperplane of phi
    if not fs.phi.singular_points:
        return Y
    gY = Y @ fs.ip.gram
    alpha = np.sqrt(np.einsum("ij,ij->i", gY, Y))
    s = gY @ fs.x / alpha
    keep = np.ones(len(Y), dtype=bool)
    for p in fs.phi.singular_points:
        keep &= np.abs(s - p) > SINGULAR_BAND
    return Y[keep]


def relative_deviations(fs: FinslerStructure, A, Y) -> np.ndarray:
    A = _mat(A)
    F = minkowski_norms(fs, Y)
    FA = minkowski_norms(fs, Y @ A.T)
    return np.abs(FA - F) / np.abs(F)


def isometry_invariance_check(fs: FinslerStructure, A, samples: int = 100, seed=0) -> float:
    """Max of ``|F(Ay) - F(y)| / |F(y)|`` over seeded unit-sphere samples.

    Requires ``A`` orthogonal for ``fs.ip`` and fixing ``X``; samples on a
    singular hyperplane of phi are skipped.
    """
    A = _mat(A)
    if not fs.usable:
        raise PreconditionError("Finsler structure is not admissible")
    if not is_orthogonal(fs.ip, A, AUTOMORPHISM_TOL):
        raise PreconditionError("A is not orthogonal for the inner product")
    if not fixes_X(A, fs.x, AUTOMORPHISM_TOL):
        raise PreconditionError(
            f"A does not fix X (|AX - X| = {fixing_residual(A, fs.x):.3e}); "
            "use converse_probe instead")
    Y = _regular_rows(fs, sphere_samples(fs.alg.dim, samples, seed))
    if len(Y) == 0:
        return 0.0
    return float(np.max(relative_deviations(fs, A, Y)))


@dataclass(frozen=True)
class ProbeResult:
    found: bool
    draws: int
    witness: Optional[np.ndarray] = None
    gap: float = 0.0


def converse_probe(fs: FinslerStructure, A, samples: int = 1000, seed=0) -> ProbeResult:
    """Search for ``y`` with ``|F(Ay) - F(y)| / |F(y)| >= WITNESS_GAP``.

    For an injective profile and an orthogonal ``A`` that moves ``X`` such a
    ``y`` exists. ``found=False`` only means the search was inconclusive.
    """
    A = _mat(A)
    if not fs.phi.injective:
        raise PreconditionError("converse probe needs an injective phi")
    if not is_orthogonal(fs.ip, A, AUTOMORPHISM_TOL):
        raise PreconditionError("A is not orthogonal for the inner product")
    shift = float(np.linalg.norm(A @ fs.x - fs.x))
    if shift < CONVERSE_MIN_SHIFT:
        raise PreconditionError(f"A fixes X (|AX - X| = {shift:.3e}); nothing to separate")
    Y = sphere_samples(fs.alg.dim, samples, seed)
    for k, y in enumerate(Y, start=1):
        try:
            gap = float(relative_deviations(fs, A, y[None, :])[0])
        except SingularityError:
            continue
        if gap >= WITNESS_GAP:
            return ProbeResult(True, k, y, gap)
    return ProbeResult(False, samples)


def random_orthogonal(ip: InnerProduct, rng, moving=None, min_shift: float = 0.0,
                      max_tries: int = 1000) -> np.ndarray:
    """Haar-random ``A`` with ``A^T g A = g``.

    With ``moving`` given, redraw until ``|A x - x| >= min_shift``.
    """
    n = ip.dim
    L = np.linalg.cholesky(ip.gram)
    for _ in range(max_tries):
        Q, R = np.linalg.qr(rng.standard_normal((n, n)))
        Q = Q * np.sign(np.diag(R))
        A = np.linalg.solve(L.T, Q @ L.T)
        if moving is None or np.linalg.norm(A @ moving - moving) >= min_shift:
            return A
    raise RuntimeError("could not draw an orthogonal map moving the vector enough")


@dataclass(frozen=True, eq=False)
class ScalingResult:
    N: int
    ip: InnerProduct
    bound: float


def admissibility_scaling(ip0: InnerProduct, x, phi: PhiFunction) -> ScalingResult:
    """Smallest integer ``N`` with ``<X, X>_0 / N < B^2``, and the metric ``<,>_0 / N``.

    ``B = max_admissible_b(phi)``. Already admissible fields give ``N = 1``.
    """
    if isinstance(x, InvariantVectorField):
        x = x.coords
    x = np.asarray(x, dtype=float)
    B = max_admissible_b(phi, ADMISSIBILITY_TOL)
    q = float(x @ ip0.gram @ x)
    N = max(1, math.floor(q / B**2) + 1)
    while q / N >= B**2:
        N += 1
    if N == 1:
        return ScalingResult(1, ip0, B)
    return ScalingResult(N, InnerProduct(ip0.gram / N), B)
