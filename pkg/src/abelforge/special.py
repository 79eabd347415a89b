"""Incomplete elliptic integrals and Jacobi amplitude functions.

Everything here uses the trigonometric-parameter convention

    F(phi | m) = integral_0^phi dtheta / sqrt(1 - m sin^2 theta),

which is what the quadrature maps of oscillator problems produce directly.
The parameter m may be negative, zero, in (0, 1), exactly 1, or larger
than 1.  For m > 1 the integrand has a real turning value at
sin(theta) = 1/sqrt(m), so the amplitude is confined to the open interval
|phi| < asin(1/sqrt(m)) and F stays finite on it; `elliptic_reach`
returns the finite supremum.  For m <= 1 the reach is infinite.

Two evaluation regimes:

* m <= 1: Legendre reduction to Carlson's symmetric form R_F, computed by
  the standard duplication iteration (a few ulp accuracy), with the
  quasi-periodicity F(phi + n pi) = 2 n K + F(phi) for |phi| > pi/2.
* m > 1: the reciprocal-parameter identity
  F(phi | m) = F(psi | 1/m)/sqrt(m), sin psi = sqrt(m) sin phi, reduces
  to the same Carlson path, so the reach K(1/m)/sqrt(m) and interior
  values are machine precise.  Within ~1e-8 of the turning value the
  amplitude's own ulp spacing limits the attainable absolute accuracy,
  since F is infinitely steep there.

`jacobi_am` inverts F by bracketed Newton, so the pair
(elliptic_f, jacobi_am) is consistent to the evaluation tolerance by
construction.  `jacobi_sn_cn_dn` extends to all real zeta for m > 1 via
the reciprocal-parameter identities, which is what periodic closed forms
built from sn require.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .expr import DomainError

__all__ = [
    "carlson_rf",
    "elliptic_f",
    "elliptic_reach",
    "jacobi_am",
    "jacobi_sn_cn_dn",
    "gudermann",
]


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_F(x, y, z) by duplication.

    Arguments must be nonnegative with at most one of them zero.  The
    iteration and the degree-5 tail expansion follow Carlson's classic
    recipe; the result is correct to roughly machine precision.
    """
    if min(x, y, z) < 0.0 or (x + y) == 0.0 or (y + z) == 0.0 or (z + x) == 0.0:
        raise ValueError("carlson_rf needs nonnegative arguments, at most one zero")
    xn, yn, zn = float(x), float(y), float(z)
    a0 = (xn + yn + zn) / 3.0
    q = max(abs(a0 - xn), abs(a0 - yn), abs(a0 - zn)) / (3.0 * 2.3e-16) ** (1.0 / 6.0)
    an = a0
    scale = 1.0
    while scale * q > abs(an):
        sx, sy, sz = math.sqrt(xn), math.sqrt(yn), math.sqrt(zn)
        lam = sx * sy + sy * sz + sz * sx
        xn = 0.25 * (xn + lam)
        yn = 0.25 * (yn + lam)
        zn = 0.25 * (zn + lam)
        an = 0.25 * (an + lam)
        scale *= 0.25
    gx = scale * (a0 - x) / an
    gy = scale * (a0 - y) / an
    gz = -gx - gy
    e2 = gx * gy - gz * gz
    e3 = gx * gy * gz
    series = (
        1.0
        - e2 / 10.0
        + e3 / 14.0
        + e2 * e2 / 24.0
        - 3.0 * e2 * e3 / 44.0
    )
    return series / math.sqrt(an)


def _f_quarter(phi: float, m: float) -> float:
    """F(phi | m) for |phi| <= pi/2 with 1 - m sin^2(phi) >= 0, via R_F."""
    s = math.sin(phi)
    c = math.cos(phi)
    rad = 1.0 - m * s * s
    if rad < 0.0:
        rad = 0.0
    return s * carlson_rf(c * c, rad, 1.0)


@lru_cache(maxsize=64)
def _quarter_period(m: float) -> float:
    """K(m) = F(pi/2 | m) for m < 1."""
    return carlson_rf(0.0, 1.0 - m, 1.0)


@lru_cache(maxsize=64)
def _steep_setup(m: float) -> tuple[float, float]:
    """For m > 1: (phi_max, reach) with reach = lim F(phi->phi_max | m).

    The reciprocal-parameter identity F(phi | m) = F(psi | 1/m)/sqrt(m),
    sin psi = sqrt(m) sin phi, sends the turning amplitude to psi = pi/2,
    so the reach is the complete integral K(1/m)/sqrt(m), exact to a few
    ulp through the Carlson iteration.
    """
    phi_max = math.asin(1.0 / math.sqrt(m))
    return phi_max, _quarter_period(1.0 / m) / math.sqrt(m)


def _f_scalar(phi: float, m: float) -> float:
    if phi < 0.0:
        return -_f_scalar(-phi, m)
    if phi == 0.0:
        return 0.0
    if m < 1.0:
        # quasi-periodicity: F(phi + n pi) = 2 n K + F(phi)
        n = math.floor((phi + 0.5 * math.pi) / math.pi)
        r = phi - n * math.pi
        head = 2.0 * n * _quarter_period(m) if n else 0.0
        return head + _f_quarter(r, m)
    if m == 1.0:
        if phi >= 0.5 * math.pi:
            raise DomainError(
                f"elliptic_f diverges at |phi| = pi/2 for m = 1 (got phi = {phi!r})"
            )
        return _f_quarter(phi, m)
    phi_max, _ = _steep_setup(m)
    if phi >= phi_max:
        raise DomainError(
            f"amplitude {phi!r} at or beyond the turning value "
            f"asin(1/sqrt(m)) = {phi_max!r} for m = {m!r}"
        )
    # reciprocal-parameter reduction: F(phi | m) = F(psi | 1/m)/sqrt(m)
    # with sin psi = sqrt(m) sin phi.  The second R_F argument
    # 1 - sin^2(psi)/m collapses to cos^2(phi) exactly, and cos^2(psi) is
    # formed as (1 - s)(1 + s) so the turning-value difference never
    # cancels catastrophically.
    rm = math.sqrt(m)
    s = rm * math.sin(phi)
    c = math.cos(phi)
    return s * carlson_rf((1.0 - s) * (1.0 + s), c * c, 1.0) / rm


def elliptic_f(phi, m: float):
    """Incomplete elliptic integral F(phi | m), any real parameter m.

    Parameters
    ----------
    phi : float or array_like
        Amplitude.  For m > 1 it must satisfy |phi| < asin(1/sqrt(m));
        for m = 1, |phi| < pi/2.  Otherwise any real value is accepted.
    m : float
        Parameter multiplying sin^2 (trigonometric convention).

    Returns
    -------
    float or ndarray matching the shape of `phi`.

    Raises
    ------
    DomainError
        When the amplitude reaches or passes the turning value.
    """
    m = float(m)
    arr = np.asarray(phi, dtype=float)
    if arr.ndim == 0:
        return _f_scalar(float(arr), m)
    out = np.empty(arr.shape, dtype=float)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    for i, p in enumerate(flat_in):
        flat_out[i] = _f_scalar(float(p), m)
    return out


def elliptic_reach(m: float) -> float:
    """Supremum of F(. | m) over its phi-domain: finite only for m > 1."""
    m = float(m)
    if m <= 1.0:
        return math.inf
    return _steep_setup(m)[1]


def _am_scalar(zeta: float, m: float, guess: float | None = None) -> float:
    if zeta < 0.0:
        return -_am_scalar(-zeta, m, None if guess is None else -guess)
    if m == 0.0:
        return zeta
    if m == 1.0:
        return math.asin(math.tanh(zeta))
    if m < 1.0:
        k = _quarter_period(m)
        n = math.floor((zeta + k) / (2.0 * k))
        zr = zeta - 2.0 * n * k
        lo, hi = -0.5 * math.pi, 0.5 * math.pi
        phi = (zr / k) * (0.5 * math.pi)
        if guess is not None and lo <= guess - n * math.pi <= hi:
            phi = guess - n * math.pi
        phi = _am_newton(zr, m, lo, hi, phi)
        return phi + n * math.pi
    # m > 1: bounded amplitude
    phi_max, reach = _steep_setup(m)
    if zeta >= reach:
        raise DomainError(
            f"jacobi_am argument {zeta!r} at or beyond the finite reach "
            f"{reach!r} for m = {m!r}"
        )
    deficit = reach - zeta
    # Close to the reach, switch to the local model
    # F(phi) ~ reach - scale * sqrt(phi_max - phi): it is accurate to
    # O(deficit^4) there, and it keeps Newton from requesting F at
    # amplitudes whose distance to the turning value is below the ulp
    # spacing of phi itself.  The result is clamped strictly inside the
    # open amplitude interval so elliptic_f can always re-evaluate it.
    scale = math.sqrt(2.0 / (math.sqrt(m) * math.cos(phi_max)))
    if deficit < 1e-4 * scale:
        v = deficit / scale
        return min(phi_max - v * v, math.nextafter(phi_max, 0.0))
    phi = guess if guess is not None else phi_max * zeta / reach
    return _am_newton(zeta, m, -phi_max, phi_max, phi)


def _am_newton(target: float, m: float, lo: float, hi: float, phi: float) -> float:
    """Solve F(phi | m) = target by Newton with a bisection safeguard.

    The open bracket (lo, hi) is maintained throughout; iterates that would
    leave it fall back to bisection, so square-root flattening of the
    inverse near a turning value cannot throw the iteration out.
    """
    if not (lo < phi < hi):
        phi = 0.5 * (lo + hi)
    blo, bhi = lo, hi
    for _ in range(120):
        g = _f_scalar(phi, m) - target
        if g > 0.0:
            bhi = min(bhi, phi)
        elif g < 0.0:
            blo = max(blo, phi)
        else:
            return phi
        s = math.sin(phi)
        deriv_rad = 1.0 - m * s * s
        step = -g * math.sqrt(deriv_rad) if deriv_rad > 0.0 else None
        if step is not None and blo < phi + step < bhi:
            new = phi + step
        else:
            new = 0.5 * (blo + bhi)
        if abs(new - phi) <= 1e-16 * (1.0 + abs(new)):
            return new
        phi = new
    return phi


def jacobi_am(zeta, m: float):
    """Jacobi amplitude am(zeta | m): the inverse of `elliptic_f` in phi.

    Vectorized over `zeta`; consecutive entries warm-start each other, so
    monotone grids invert quickly.  For m > 1 the argument must lie inside
    the open interval (-reach, reach): the amplitude saturates at the
    turning value and has no real continuation beyond it.

    Raises
    ------
    DomainError
        For m > 1 when |zeta| reaches or exceeds the finite reach.
    """
    m = float(m)
    arr = np.asarray(zeta, dtype=float)
    if arr.ndim == 0:
        return _am_scalar(float(arr), m)
    out = np.empty(arr.shape, dtype=float)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    prev: float | None = None
    for i, z in enumerate(flat_in):
        prev = _am_scalar(float(z), m, prev)
        flat_out[i] = prev
    return out


def jacobi_sn_cn_dn(zeta, m: float):
    """Jacobi sn, cn, dn with parameter m; tuple (sn, cn, dn).

    For m <= 1 these come straight from the amplitude.  For m > 1 the
    reciprocal-parameter identities

        sn(x | m) = sn(x sqrt(m) | 1/m) / sqrt(m)
        cn(x | m) = dn(x sqrt(m) | 1/m)
        dn(x | m) = cn(x sqrt(m) | 1/m)

    define the standard real continuation, periodic over the whole line,
    which coincides with the amplitude-based values inside the reach.
    """
    m = float(m)
    if m > 1.0:
        rm = math.sqrt(m)
        sn_r, cn_r, dn_r = jacobi_sn_cn_dn(np.asarray(zeta, dtype=float) * rm, 1.0 / m)
        return sn_r / rm, dn_r, cn_r
    phi = jacobi_am(zeta, m)
    sn = np.sin(phi)
    cn = np.cos(phi)
    rad = 1.0 - m * sn * sn
    dn = np.sqrt(np.maximum(rad, 0.0))
    return sn, cn, dn


def gudermann(x):
    """Gudermannian gd(x) = asin(tanh(x)); equals am(x | 1)."""
    return np.arcsin(np.tanh(np.asarray(x, dtype=float))) if np.ndim(x) else math.asin(math.tanh(x))
