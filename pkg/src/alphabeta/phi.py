"""The profile function phi of an (alpha, beta)-metric F = alpha * phi(beta / alpha).

A regular profile must satisfy, for every ``|s| <= b < b0``::

    phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) > 0

``regularity_margin`` minimizes the left side over the strip and
``max_admissible_b`` turns that into the largest usable ``|X|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .errors import NonRegularError, SingularityError

# stands in for b0 = +inf
INFINITE_B0 = 1e300
MARGIN_GRID = 2048
SCAN_POINTS = 512
INJECTIVITY_SAMPLES = 1001
_SAMPLE_CAP = 10.0
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

KINDS = ("randers", "kropina", "matsumoto", "series")


@dataclass(frozen=True)
class PhiFunction:
    kind: str
    b0: float
    injective: bool
    b0_finite: bool = True
    series_coeffs: Optional[Tuple[float, ...]] = None
    singular_points: Tuple[float, ...] = ()
    regular: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown phi kind {self.kind!r}")
        if not self.b0 > 0:
            raise ValueError("b0 must be positive")
        if self.kind == "series" and not self.series_coeffs:
            raise ValueError("series phi needs at least one coefficient")

    def eval(self, s):
        """Return ``(phi, phi', phi'')`` at ``s`` (scalar or array).

        Only declared singular points are refused; the domain radius is
        not enforced here so that inadmissible structures can be probed.
        """
        s = np.asarray(s, dtype=float)
        for p in self.singular_points:
            if np.any(s == p):
                raise SingularityError(f"phi ({self.kind}) is singular at s = {p}")
        if self.kind == "randers":
            return 1.0 + s, np.ones_like(s), np.zeros_like(s)
        if self.kind == "kropina":
            return 1.0 / s, -1.0 / s**2, 2.0 / s**3
        if self.kind == "matsumoto":
            u = 1.0 / (1.0 - s)
            return u, u**2, 2.0 * u**3
        return _horner3(self.series_coeffs, s)

    def __call__(self, s):
        return self.eval(s)[0]

    @property
    def sample_radius(self) -> float:
        return self.b0 if self.b0_finite else _SAMPLE_CAP

    def branches(self):
        """Open intervals of the sampled domain between singular points."""
        r = self.sample_radius
        cuts = sorted(p for p in self.singular_points if -r < p < r)
        edges = [-r, *cuts, r]
        return list(zip(edges[:-1], edges[1:]))


def _horner3(coeffs, s):
    # value, first and second derivative in one pass
    p = np.zeros_like(s)
    dp = np.zeros_like(s)
    ddp = np.zeros_like(s)
    for a in reversed(coeffs):
        ddp = ddp * s + 2.0 * dp
        dp = dp * s + p
        p = p * s + a
    return p, dp, ddp


def make_randers() -> PhiFunction:
    return PhiFunction(kind="randers", b0=1.0, injective=True)


def make_kropina() -> PhiFunction:
    # 1/s is monotone on each half-line; never a regular Finsler metric
    return PhiFunction(kind="kropina", b0=INFINITE_B0, b0_finite=False, injective=True,
                       singular_points=(0.0,), regular=False)


def make_matsumoto() -> PhiFunction:
    return PhiFunction(kind="matsumoto", b0=1.0, injective=True)


def make_series(coeffs, b0: float) -> PhiFunction:
    """``phi(s) = sum_k coeffs[k] s^k`` on ``(-b0, b0)``; injectivity is certified by sampling."""
    coeffs = tuple(float(c) for c in coeffs)
    if not all(math.isfinite(c) for c in coeffs):
        raise ValueError("series coefficients must be finite")
    if not math.isfinite(b0):
        raise ValueError("series phi needs a finite b0")
    probe = PhiFunction(kind="series", b0=float(b0), injective=False, series_coeffs=coeffs)
    inj = injectivity_check(probe, INJECTIVITY_SAMPLES)
    return PhiFunction(kind="series", b0=float(b0), injective=inj, series_coeffs=coeffs)


def make_phi(kind: str, coeffs=None, b0=None) -> PhiFunction:
    if kind == "randers":
        return make_randers()
    if kind == "kropina":
        return make_kropina()
    if kind == "matsumoto":
        return make_matsumoto()
    if kind == "series":
        return make_series(coeffs, b0)
    raise ValueError(f"unknown phi kind {kind!r}")


def regularity_expression(phi: PhiFunction, b: float, s):
    f, df, ddf = phi.eval(s)
    return f - s * df + (b * b - s * s) * ddf


def _golden_min(func, lo, hi, iters=60):
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = func(c), func(d)
    for _ in range(iters):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = func(d)
    return min(fc, fd)


def regularity_margin(phi: PhiFunction, b: float) -> float:
    """Minimum of the regularity expression over ``|s| <= b``.

    Uniform grid of ``MARGIN_GRID`` points, then golden-section refinement
    in the cells around the grid minimum. A positive value certifies the
    inequality at this ``b`` up to grid resolution.
    """
    if not (0.0 <= b < phi.b0):
        raise ValueError(f"b = {b} outside [0, {phi.b0})")
    if any(-b <= p <= b for p in phi.singular_points):
        raise NonRegularError(
            f"phi ({phi.kind}) has a singular point inside [-{b}, {b}]")
    if b == 0.0:
        return float(regularity_expression(phi, 0.0, 0.0))
    s = np.linspace(-b, b, MARGIN_GRID)
    vals = regularity_expression(phi, b, s)
    k = int(np.argmin(vals))
    lo, hi = s[max(k - 1, 0)], s[min(k + 1, MARGIN_GRID - 1)]
    refined = _golden_min(lambda t: float(regularity_expression(phi, b, t)), lo, hi)
    return float(min(vals[k], refined))


@lru_cache(maxsize=64)
def max_admissible_b(phi: PhiFunction, tol: float = 1e-6) -> float:
    """Largest ``b < b0`` such that the margin stays positive on ``[0, b]``.

    Scans ``SCAN_POINTS`` radii, then bisects the first failing cell (or the
    last cell before ``b0``) down to width ``tol``. The returned value always
    has a positive margin.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not phi.regular:
        raise NonRegularError(f"phi ({phi.kind}) is not a regular profile")
    top = phi.sample_radius
    radii = np.linspace(0.0, top, SCAN_POINTS, endpoint=False)

    def ok(b):
        try:
            return regularity_margin(phi, b) > 0.0
        except NonRegularError:
            return False

    if not ok(0.0):
        raise NonRegularError(f"phi ({phi.kind}) has no positive-margin radius")
    lo = 0.0
    hi = top
    for b in radii[1:]:
        if ok(b):
            lo = b
        else:
            hi = b
            break
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid >= phi.b0:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return float(lo)


def injectivity_check(phi: PhiFunction, samples: int = INJECTIVITY_SAMPLES) -> bool:
    """Strict monotonicity of phi on an open-interval sample, per continuous branch."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    for a, c in phi.branches():
        s = np.linspace(a, c, samples + 2)[1:-1]
        d = np.diff(phi(s))
        if not (np.all(d > 0) or np.all(d < 0)):
            return False
    return True


def _consistency_points(phi, n, rng):
    pts = []
    for a, c in phi.branches():
        width = c - a
        pts.append(rng.uniform(a + 0.05 * width, c - 0.05 * width, n))
    pts = np.concatenate(pts)
    return pts[:n] if len(phi.branches()) == 1 else pts


def derivative_consistency(phi: PhiFunction, points: int = 100, seed: int = 0) -> float:
    """Worst relative gap between central differences and the stated derivatives.

    Checks phi' against differences of phi, and phi'' against differences
    of phi', at seeded points inside 90% of each branch.
    """
    rng = np.random.default_rng(seed)
    s = _consistency_points(phi, points, rng)
    h = 1e-5 * np.maximum(1.0, np.abs(s))
    fp, dfp, _ = phi.eval(s + h)
    fm, dfm, _ = phi.eval(s - h)
    _, df, ddf = phi.eval(s)
    fd1 = (fp - fm) / (2 * h)
    fd2 = (dfp - dfm) / (2 * h)
    # relative to the derivative scale, with an absolute floor for zeros
    e1 = np.abs(fd1 - df) / np.maximum(np.abs(df), 1.0)
    e2 = np.abs(fd2 - ddf) / np.maximum(np.abs(ddf), 1.0)
    return float(max(e1.max(), e2.max()))


def positivity_check(phi: PhiFunction, samples: int = INJECTIVITY_SAMPLES) -> bool:
    """phi > 0 on the sampled domain; for kropina only the positive branch counts."""
    for a, c in phi.branches():
        if phi.kind == "kropina" and c <= 0:
            continue
        s = np.linspace(a, c, samples + 2)[1:-1]
        if not np.all(phi(s) > 0):
            return False
    return True
