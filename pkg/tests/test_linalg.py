import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from alphabeta.linalg import expm, frobenius_orthonormality, nullspace, span_residual


@pytest.mark.parametrize("scale", [0.0, 1e-3, 1.0, 10.0, 50.0])
def test_expm_matches_scipy(scale):
    rng = np.random.default_rng(int(scale * 10))
    A = rng.standard_normal((6, 6))
    A *= scale / max(np.linalg.norm(A, 2), 1e-300)
    ref = scipy_expm(A)
    np.testing.assert_allclose(expm(A), ref, rtol=1e-12 * max(1, scale), atol=1e-13 * np.abs(ref).max())


def test_expm_nilpotent_is_polynomial():
    N = np.array([[0, 1.0, 2.0], [0, 0, 3.0], [0, 0, 0]])
    np.testing.assert_allclose(expm(N), np.eye(3) + N + N @ N / 2, atol=1e-15)


def test_expm_quarter_turn():
    W = np.array([[0, -1.0], [1.0, 0]]) * np.pi / 2
    np.testing.assert_allclose(expm(W), [[0, -1], [1, 0]], atol=1e-15)


def test_nullspace_rank_decisions():
    A = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    ns = nullspace(A)
    assert ns.shape == (3, 2)
    np.testing.assert_allclose(A @ ns, 0, atol=1e-14)
    np.testing.assert_allclose(ns.T @ ns, np.eye(2), atol=1e-14)
    assert nullspace(np.zeros((4, 3))).shape == (3, 3)
    assert nullspace(np.eye(3)).shape == (3, 0)


def test_nullspace_scale_floor():
    noise = np.full((2, 3), 1e-17)
    assert nullspace(noise).shape[1] == 2  # relative-only threshold sees rank 1
    assert nullspace(noise, scale=1.0).shape[1] == 3


def test_span_residual():
    B = np.array([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert frobenius_orthonormality(B) == 0
    assert span_residual(np.array([np.diag([3.0, -2.0])]), B) == pytest.approx(0, abs=1e-15)
    off = np.array([[[0.0, 1.0], [0.0, 0.0]]])
    assert span_residual(off, B) == pytest.approx(1.0)
