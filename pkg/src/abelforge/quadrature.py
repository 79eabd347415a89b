"""Quadrature kernels shared by the construction and inversion code.

Two engines: tanh-sinh (double-exponential) for integrands with steep or
mildly singular endpoint behaviour, and adaptive Gauss-Legendre for smooth
panels.  Integrands must be vectorized over numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["QuadratureFailure", "tanh_sinh", "gauss16", "adaptive_gauss"]


class QuadratureFailure(RuntimeError):
    """An integral could not be brought to its target accuracy."""


# |t| cap: at 6.11 the tanh-sinh weight is ~1e-304, the last value that
# does not overflow cosh^2 in doubles.
_TMAX = 6.11

_level_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _level_nodes(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes new at this refinement level, as endpoint offsets.

    Returns (sigma, left, w): sigma is each node's distance to its nearer
    interval endpoint in [-1, 1] units, left marks nodes belonging to the
    lower endpoint.  Keeping the offset instead of the abscissa matters:
    1 - |tanh(g)| underflows long before the offset 2 e^(-2|g|)/(1+e^(-2|g|))
    does, and an endpoint-singular integrand must be evaluated at its true
    tiny distance, not at a distance rounded onto the eps grid.
    """
    if level in _level_cache:
        return _level_cache[level]
    h = 0.5**level
    if level == 0:
        t = np.arange(-np.floor(_TMAX), np.floor(_TMAX) + 1.0)
    else:
        odd = np.arange(1.0, _TMAX / h, 2.0)
        t = np.concatenate([-odd[::-1], odd]) * h
    g = 0.5 * np.pi * np.sinh(t)
    e2 = np.exp(-2.0 * np.abs(g))
    sigma = 2.0 * e2 / (1.0 + e2)
    w = 0.5 * np.pi * np.cosh(t) / np.cosh(g) ** 2
    _level_cache[level] = (sigma, g < 0.0, w)
    return sigma, g < 0.0, w


def tanh_sinh(f, a: float, b: float, target: float = 1e-12, max_level: int = 10):
    """Integrate ``f`` from a to b; returns (value, error_estimate).

    ``target`` is an absolute tolerance on the level-to-level change.
    Raises QuadratureFailure if the integrand is non-finite at a node or
    the refinement stalls.
    """
    half = 0.5 * (b - a)
    if half == 0.0:
        return 0.0, 0.0
    total = 0.0
    prev = np.inf
    delta = np.inf
    prev_delta = np.inf
    for level in range(max_level + 1):
        sigma, left, w = _level_nodes(level)
        pts = np.where(left, a + half * sigma, b - half * sigma)
        # Nodes whose offset underflows onto an endpoint are dropped: their
        # true contribution decays double-exponentially, but an endpoint
        # singularity cannot be evaluated at distance zero.
        keep = (pts != a) & (pts != b)
        fx = np.zeros(pts.shape)
        with np.errstate(all="ignore"):
            fx[keep] = np.asarray(f(pts[keep]), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise QuadratureFailure(
                f"integrand non-finite at a tanh-sinh node in [{a!r}, {b!r}]"
            )
        piece = float(np.dot(w, fx)) * 0.5**level * half
        total = piece if level == 0 else 0.5 * total + piece
        if level >= 2:
            delta = abs(total - prev)
            if delta <= max(target, 4e-16 * abs(total)):
                return total, delta
            # Stalled small change: a singular endpoint interior to the ulp
            # grid of its abscissa caps the attainable accuracy; refining
            # further only resamples that noise.  Return the honest estimate
            # as long as the change is already small, else keep going.
            if (level >= 3 and delta >= 0.9 * prev_delta
                    and delta <= math.sqrt(target) * (1.0 + abs(total))):
                return total, delta
            prev_delta = delta
        prev = total
    raise QuadratureFailure(
        f"tanh-sinh did not converge on [{a!r}, {b!r}] (last change {delta:.3e})"
    )


_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _gl_cache:
        _gl_cache[n] = np.polynomial.legendre.leggauss(n)
    return _gl_cache[n]


def gauss16(f, a: float, b: float) -> float:
    """Fixed 16-point Gauss-Legendre panel (no error control)."""
    x, w = _gl(16)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    if half == 0.0:
        return 0.0
    return half * float(np.dot(w, np.asarray(f(mid + half * x), dtype=float)))


def _gauss_pair(f, a: float, b: float) -> tuple[float, float, float, float]:
    """(16-point value, |16-point - 8-point|, f spread, max |f|) on one panel."""
    x8, w8 = _gl(8)
    x16, w16 = _gl(16)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = np.concatenate([mid + half * x8, mid + half * x16])
    with np.errstate(all="ignore"):
        fv = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise QuadratureFailure(f"integrand non-finite on panel [{a!r}, {b!r}]")
    v8 = half * float(np.dot(w8, fv[:8]))
    v16 = half * float(np.dot(w16, fv[8:]))
    return v16, abs(v16 - v8), float(np.max(fv) - np.min(fv)), float(np.max(np.abs(fv)))


def adaptive_gauss(f, a: float, b: float, target: float = 1e-12, max_depth: int = 60,
                   inv_sqrt_noise: float = 0.0) -> float:
    """Adaptive Gauss-Legendre with dyadic splitting; absolute target.

    The target is distributed over sub-panels in proportion to width, with a
    roundoff floor of a few ulp of the panel value, so integrable endpoint
    steepness refines without demanding sub-noise accuracy.

    inv_sqrt_noise, when positive, is the absolute roundoff scale of the
    radicand for integrands of the form 1/sqrt(r(u)) where r is computed by
    cancellation of larger terms: df = -f^3 dr / 2, so such an f carries
    evaluation noise ~ |f|^3 * inv_sqrt_noise and a panel's 8/16 difference
    bottoms out near width * max|f|^3 * inv_sqrt_noise.  Without this floor
    the splitter thrashes forever on near-pole panels whose error is pure
    evaluation noise.
    """
    if a == b:
        return 0.0
    span = abs(b - a)

    def recurse(lo: float, hi: float, depth: int) -> float:
        v, err, spread, fmax = _gauss_pair(f, lo, hi)
        width = abs(hi - lo)
        # Noise floor: below a few ulp of the panel value the 8/16 difference
        # is roundoff, and on panels where f varies strongly over an ulp of
        # the abscissa it is node-placement jitter ~ eps*|u|*spread.  Either
        # way splitting cannot reduce it, only multiply panels.
        noise = 3e-15 * abs(v) + 8.0 * 2.3e-16 * max(abs(lo), abs(hi)) * spread
        if inv_sqrt_noise > 0.0:
            noise = max(noise, inv_sqrt_noise * width * fmax * fmax * fmax)
        if err <= max(target * width / span, noise):
            return v
        ratio = width / span
        if ratio < 1e-6 and err <= 0.05 * target * math.sqrt(ratio):
            # deep in the dyadic funnel around an integrable singularity the
            # width-proportional budget starves panels whose contribution
            # only scales like sqrt(width); the funnel visits O(1) panels
            # per level, so a sqrt(width) budget still sums well under target
            return v
        if width <= 8.0 * np.spacing(max(abs(lo), abs(hi))):
            return v  # interval at double-precision resolution
        if depth >= max_depth:
            raise QuadratureFailure(
                f"adaptive quadrature exhausted depth on [{lo!r}, {hi!r}] (err {err:.3e})"
            )
        mid = 0.5 * (lo + hi)
        if mid <= min(lo, hi) or mid >= max(lo, hi):
            return v
        return recurse(lo, mid, depth + 1) + recurse(mid, hi, depth + 1)

    return recurse(a, b, 0)
