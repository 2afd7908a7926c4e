"""Dense linear-algebra kernels: SVD nullspace and the matrix exponential."""
from __future__ import annotations

import math

import numpy as np

NULLSPACE_RTOL = 1e-10
_PADE_ORDER = 6
# Pade coefficients c_k = (2q-k)! q! / ((2q)! k! (q-k)!)
_PADE = [math.factorial(2 * _PADE_ORDER - k) * math.factorial(_PADE_ORDER)
         / (math.factorial(2 * _PADE_ORDER) * math.factorial(k)
            * math.factorial(_PADE_ORDER - k))
         for k in range(_PADE_ORDER + 1)]


def nullspace(A, rtol=NULLSPACE_RTOL, scale=0.0):
    """Orthonormal basis (as columns) of ``ker A``.

    Singular values below ``rtol * max(sigma_max, scale)`` count as zero.
    ``scale`` is the nominal size of the operator; without it a matrix made
    only of rounding noise would look full rank. A zero matrix has the
    whole domain as its kernel.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    ref = max(s[0] if s.size else 0.0, scale)
    rank = int(np.sum(s > rtol * ref)) if ref > 0 else 0
    return vh[rank:].T.copy()


def expm(A):
    """Matrix exponential by scaling and squaring with a (6, 6) Pade kernel.

    The matrix is scaled so that its 1-norm is at most 1/2, where the
    diagonal Pade approximant is accurate to double precision.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    nrm = np.linalg.norm(A, 1)
    s = max(0, int(math.ceil(math.log2(nrm / 0.5)))) if nrm > 0 else 0
    X = A / 2.0**s
    P = np.eye(n) * _PADE[0]
    Q = np.eye(n) * _PADE[0]
    power = np.eye(n)
    for k in range(1, _PADE_ORDER + 1):
        power = power @ X
        P = P + _PADE[k] * power
        Q = Q + (-1) ** k * _PADE[k] * power
    E = np.linalg.solve(Q, P)
    for _ in range(s):
        E = E @ E
    return E


def frobenius_orthonormality(mats) -> float:
    """Max deviation of the Frobenius Gram matrix of ``mats`` from the identity."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[0] == 0:
        return 0.0
    V = mats.reshape(mats.shape[0], -1)
    return float(np.max(np.abs(V @ V.T - np.eye(V.shape[0]))))


def span_residual(mats, basis) -> float:
    """Largest distance from an element of ``mats`` to ``span(basis)``.

    ``basis`` must be Frobenius-orthonormal. Distances are Frobenius norms.
    """
    mats = np.asarray(mats, dtype=float)
    if mats.shape[0] == 0:
        return 0.0
    M = mats.reshape(mats.shape[0], -1)
    basis = np.asarray(basis, dtype=float)
    if basis.shape[0] == 0:
        return float(np.max(np.linalg.norm(M, axis=1)))
    B = basis.reshape(basis.shape[0], -1)
    R = M - (M @ B.T) @ B
    return float(np.max(np.linalg.norm(R, axis=1)))
