"""Worked families of Chiellini-integrable dissipative oscillators.

Each builder returns a CatalogEntry bundling the oscillator
u'' + g(u) u' + h(u) = 0, the explicit branch field eta (du/dzeta = eta(u)),
and, where one exists in elementary or elliptic terms, the closed-form
trajectory with its validity window.  All four families sit at Chiellini
constant k = -2 with the unit scale root c = 1, so eta coincides with h/g
wherever g is nonzero.

The closed forms packaged here are the ones that satisfy the defining speed
identity du/dzeta = eta(u) to machine precision; variants of several of
these formulas circulate with dropped amplitude factors or rescaled
arguments, and the entry notes flag the sensitive spots.  Trajectory
formulas for dissipative equations hold on monotone arcs: an even profile
such as the dark soliton solves the equation on its rising side, while the
falling side is the fold continuation of the branch field (|u'| = |eta|).
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import special
from .abelcore import DissipativeOde, EtaField, eta_from_g, eta_from_h
from .expr import DomainError

__all__ = [
    "CatalogEntry",
    "fisher",
    "pendulum",
    "sine_pendulum",
    "burgers_huxley",
    "names",
    "parameter_schema",
    "build",
]

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CatalogEntry:
    """A named oscillator with its branch field and optional closed form.

    Attributes
    ----------
    name : str
        Registry key, hyphenated (matches the command-line spelling).
    parameters : dict
        The free parameters this entry was built with.
    ode : DissipativeOde
        The oscillator; identical to ``eta.ode``.
    eta : EtaField
        Branch field with construction constants and domain metadata.
    figure_tag : str
        Short description of the trajectory shape the entry reproduces.
    u_window : (float, float)
        A u-interval on which g, h, and h/g are well conditioned, suitable
        for pointwise classification and residual sampling.
    closed_form, closed_form_d, closed_form_dd : callable or None
        Vectorized zeta -> u, du/dzeta, and d2u/dzeta2, when available.
        All derivatives are analytic, so residual checks do not need
        finite differences (which lose digits near poles).
    validity : (float, float) or None
        Open zeta-interval on which the closed form solves the equation;
        residual checks should sample strictly inside it.
    notes : str
        Caveats: misprint-prone constants, branch conventions, monotone
        validity of even profiles.
    """

    name: str
    parameters: dict
    ode: DissipativeOde
    eta: EtaField
    figure_tag: str
    u_window: tuple[float, float]
    closed_form: Callable | None = None
    closed_form_d: Callable | None = None
    closed_form_dd: Callable | None = None
    validity: tuple[float, float] | None = None
    notes: str = ""


def _window_from_domain(eta: EtaField, fallback: tuple[float, float]) -> tuple[float, float]:
    """A conditioning-friendly u-window: the detected positivity run that
    contains 0 (else the first run), shrunk 10% from each edge."""
    if not eta.domain:
        return fallback
    runs = eta.domain
    pick = runs[0]
    for a, b in runs:
        if a < 0.0 < b:
            pick = (a, b)
            break
    a, b = pick
    pad = 0.1 * (b - a)
    return (a + pad, b - pad)


def fisher(c2: float = 0.5) -> CatalogEntry:
    """Convective Fisher-type oscillator: h = u(1 - u), eta^2 = 4c2/3 - 2u^2 + 4u^3/3.

    The dissipation is the companion g = h/eta, i.e. g(u) = mu(u) * u with
    the convective factor mu(u) = (1 - u)/eta(u).  Closed forms are attached
    at two parameter points: c2 = 1/2, the dark soliton
    1 - (3/2) sech^2(zeta/sqrt 2) on its rising half, and c2 = 1/4, an
    elliptic oscillation between the two smallest roots of the radicand.
    Other values of c2 produce a usable field without a packaged formula.
    """
    c2 = float(c2)
    c1 = 4.0 * c2 / 3.0
    eta = eta_from_h("u*(1 - u)", k=-2.0, c1=c1)
    u_window = _window_from_domain(eta, (-0.4, 0.9))

    closed_form = closed_form_d = closed_form_dd = validity = None
    figure_tag = "convective front field"
    notes = ""
    if abs(c2 - 0.5) <= 1e-12:
        def closed_form(z):
            x = np.asarray(z, dtype=float) / _SQRT2
            sech = 1.0 / np.cosh(x)
            return 1.0 - 1.5 * sech * sech

        def closed_form_d(z):
            x = np.asarray(z, dtype=float) / _SQRT2
            sech = 1.0 / np.cosh(x)
            return (3.0 / _SQRT2) * sech * sech * np.tanh(x)

        def closed_form_dd(z):
            x = np.asarray(z, dtype=float) / _SQRT2
            sech2 = 1.0 / np.cosh(x) ** 2
            th = np.tanh(x)
            return 1.5 * sech2 * (sech2 - 2.0 * th * th)

        validity = (0.0, 10.0)
        figure_tag = "dark soliton profile"
        notes = (
            "sech^2 argument is zeta/sqrt(2); with zeta/2 the slope misses "
            "eta(u) by a factor sqrt(2).  The even profile solves the "
            "oscillator only on its rising half; past zeta ~ 10 the "
            "companion g = h/eta is evaluated too close to the u = 1 "
            "equilibrium for double precision."
        )
    elif abs(c2 - 0.25) <= 1e-12:
        r_lo = 0.5 * (1.0 - _SQRT3)
        amp = 0.5 * _SQRT3
        lam = 3.0 ** -0.25
        half = special.elliptic_f(0.5 * math.pi, 0.5) / lam

        def closed_form(z):
            sn, _, _ = special.jacobi_sn_cn_dn(lam * np.asarray(z, dtype=float), 0.5)
            return r_lo + amp * sn * sn

        def closed_form_d(z):
            sn, cn, dn = special.jacobi_sn_cn_dn(lam * np.asarray(z, dtype=float), 0.5)
            return 2.0 * amp * lam * sn * cn * dn

        def closed_form_dd(z):
            sn, cn, dn = special.jacobi_sn_cn_dn(lam * np.asarray(z, dtype=float), 0.5)
            sn2, cn2, dn2 = sn * sn, cn * cn, dn * dn
            return 2.0 * amp * lam * lam * (cn2 * dn2 - sn2 * dn2 - 0.5 * sn2 * cn2)

        validity = (0.0, half)
        figure_tag = "bounded oscillation between simple roots"
        notes = (
            "modulus m = 1/2, argument zeta/3^(1/4), amplitude "
            "sqrt(3)/2 = r2 - r1.  The reciprocal-parameter rendering "
            "sqrt(3) sn^2(.|2) denotes the same curve only after rescaling "
            "its argument by sqrt(2).  Valid on one increasing half-period; "
            "the continuation beyond the fold repeats by reflection."
        )

    return CatalogEntry(
        name="fisher",
        parameters={"c2": c2},
        ode=eta.ode,
        eta=eta,
        figure_tag=figure_tag,
        u_window=u_window,
        closed_form=closed_form,
        closed_form_d=closed_form_d,
        closed_form_dd=closed_form_dd,
        validity=validity,
        notes=notes,
    )


def pendulum(m: float = 2.0) -> CatalogEntry:
    """Damped pendulum-type oscillator: h = sin u, eta^2 = (8/m - 4) + 4 cos u.

    One closed-form path covers every m > 0:

        u(zeta) = 2 am(zeta sqrt(2/m) | m)

    giving libration arcs of finite reach for m > 1, the separatrix kink
    2 asin(tanh(zeta sqrt 2)) at m = 1, and whole-line rotation for m < 1.

    Raises DomainError for m <= 0 (the radicand constant 8/m is undefined
    at 0 and the amplitude inversion needs a positive parameter).
    """
    m = float(m)
    if m <= 0.0:
        raise DomainError(f"pendulum parameter m must be positive, got {m!r}")
    c3 = 8.0 / m - 4.0
    eta = eta_from_h("sin(u)", k=-2.0, c1=c3)
    lam = math.sqrt(2.0 / m)

    def closed_form(z):
        return 2.0 * special.jacobi_am(lam * np.asarray(z, dtype=float), m)

    def closed_form_d(z):
        _, _, dn = special.jacobi_sn_cn_dn(lam * np.asarray(z, dtype=float), m)
        return 2.0 * lam * dn

    def closed_form_dd(z):
        sn, cn, _ = special.jacobi_sn_cn_dn(lam * np.asarray(z, dtype=float), m)
        return -2.0 * lam * lam * m * sn * cn

    if m > 1.0:
        edge = special.elliptic_reach(m) / lam
        validity = (-edge, edge)
        figure_tag = "pendulum libration arc"
    elif m == 1.0:
        validity = (-10.0, 10.0)
        figure_tag = "separatrix kink"
    else:
        validity = (-10.0, 10.0)
        figure_tag = "rotating pendulum sweep"

    return CatalogEntry(
        name="pendulum",
        parameters={"m": m},
        ode=eta.ode,
        eta=eta,
        figure_tag=figure_tag,
        u_window=_window_from_domain(eta, (-1.2, 1.2)),
        closed_form=closed_form,
        closed_form_d=closed_form_d,
        closed_form_dd=closed_form_dd,
        validity=validity,
        notes=(
            "the amplitude factor is 2: u = 2 am(zeta sqrt(2/m) | m).  "
            "Dropping it breaks du/dzeta = eta(u) for every m."
        ),
    )


def sine_pendulum(c0: float = 2.0) -> CatalogEntry:
    """Sine-dissipation oscillator: g = sin u, h = c0 sin u + sin 2u.

    The branch field is eta(u) = c0 + 2 cos u and the quadrature
    integral(du / (c0 + 2 cos u)) inverts in elementary terms for every c0,
    in four regimes split by |c0| vs 2:

    * |c0| < 2: kink 2 arctan(A tanh(B zeta)) between adjacent rest points,
      A = (2 + c0)/sqrt(4 - c0^2), B = sqrt(4 - c0^2)/2;
    * c0 = 2: algebraic kink 2 arctan(2 zeta);
    * c0 = -2: algebraic kink 2 arccot(2 zeta) = pi - 2 arctan(2 zeta);
    * |c0| > 2: one periodic sweep 2 arctan(A tan(B zeta)) with
      A = (2 + c0)/sqrt(c0^2 - 4), B = sqrt(c0^2 - 4)/2, valid between the
      poles at |zeta| = pi/sqrt(c0^2 - 4).
    """
    c0 = float(c0)
    eta = eta_from_g("sin(u)", k=-2.0, c0=c0)
    disc = 4.0 - c0 * c0
    notes = ""

    if c0 == 2.0:
        def closed_form(z):
            return 2.0 * np.arctan(2.0 * np.asarray(z, dtype=float))

        def closed_form_d(z):
            zz = np.asarray(z, dtype=float)
            return 4.0 / (1.0 + 4.0 * zz * zz)

        def closed_form_dd(z):
            zz = np.asarray(z, dtype=float)
            den = 1.0 + 4.0 * zz * zz
            return -32.0 * zz / (den * den)

        validity = (-10.0, 10.0)
        figure_tag = "algebraic kink"
    elif c0 == -2.0:
        def closed_form(z):
            return math.pi - 2.0 * np.arctan(2.0 * np.asarray(z, dtype=float))

        def closed_form_d(z):
            zz = np.asarray(z, dtype=float)
            return -4.0 / (1.0 + 4.0 * zz * zz)

        def closed_form_dd(z):
            zz = np.asarray(z, dtype=float)
            den = 1.0 + 4.0 * zz * zz
            return 32.0 * zz / (den * den)

        validity = (-10.0, 10.0)
        figure_tag = "algebraic kink"
        notes = "decreasing branch through u(0) = pi; arccot spelled via arctan."
    elif disc > 0.0:
        root = math.sqrt(disc)
        a = (2.0 + c0) / root
        b = 0.5 * root

        def closed_form(z):
            t = a * np.tanh(b * np.asarray(z, dtype=float))
            return 2.0 * np.arctan(t)

        def closed_form_d(z):
            zz = np.asarray(z, dtype=float)
            t = a * np.tanh(b * zz)
            sech = 1.0 / np.cosh(b * zz)
            return 2.0 * a * b * sech * sech / (1.0 + t * t)

        def closed_form_dd(z):
            zz = np.asarray(z, dtype=float)
            t = a * np.tanh(b * zz)
            sech2 = 1.0 / np.cosh(b * zz) ** 2
            dt = a * b * sech2
            ddt = -2.0 * a * b * b * sech2 * np.tanh(b * zz)
            den = 1.0 + t * t
            return 2.0 * ddt / den - 4.0 * t * dt * dt / (den * den)

        validity = (-10.0, 10.0)
        figure_tag = "kink between adjacent rest points"
    else:
        root = math.sqrt(-disc)
        a = (2.0 + c0) / root
        b = 0.5 * root

        def closed_form(z):
            t = a * np.tan(b * np.asarray(z, dtype=float))
            return 2.0 * np.arctan(t)

        def closed_form_d(z):
            zz = np.asarray(z, dtype=float)
            t = a * np.tan(b * zz)
            cos = np.cos(b * zz)
            return 2.0 * a * b / (cos * cos * (1.0 + t * t))

        def closed_form_dd(z):
            zz = np.asarray(z, dtype=float)
            t = a * np.tan(b * zz)
            sec2 = 1.0 / np.cos(b * zz) ** 2
            dt = a * b * sec2
            ddt = 2.0 * a * b * b * sec2 * np.tan(b * zz)
            den = 1.0 + t * t
            return 2.0 * ddt / den - 4.0 * t * dt * dt / (den * den)

        validity = (-math.pi / root, math.pi / root)
        figure_tag = "circulating sweep between poles"
        notes = "one branch of the arctan; the formula jumps by 2 pi at the poles."

    return CatalogEntry(
        name="sine-pendulum",
        parameters={"c0": c0},
        ode=eta.ode,
        eta=eta,
        figure_tag=figure_tag,
        u_window=(0.3, 2.7),
        closed_form=closed_form,
        closed_form_d=closed_form_d,
        closed_form_dd=closed_form_dd,
        validity=validity,
        notes=notes,
    )


def burgers_huxley(mu: float = 1.0, c0: float = 1.0) -> CatalogEntry:
    """Traveling-wave oscillator of Burgers-Huxley type: g = mu u, h = mu u (c0 - mu u^2).

    The branch field is eta(u) = c0 - mu u^2.  Three closed-form regimes:

    * mu c0 > 0: front u = sqrt(c0/mu) tanh(zeta sqrt(mu c0)) between the
      plateaus +-sqrt(c0/mu);
    * c0 = 0: algebraic decay u = 1/(mu zeta), singular at zeta = 0;
    * mu c0 < 0: blow-up arc u = sign(c0) sqrt(-c0/mu) tan(zeta sqrt(-mu c0))
      between adjacent poles.

    Raises DomainError for mu = 0 (no dissipation; the family degenerates).
    """
    mu = float(mu)
    c0 = float(c0)
    if mu == 0.0:
        raise DomainError("burgers-huxley parameter mu must be nonzero")
    eta = eta_from_g(f"{mu!r}*u", k=-2.0, c0=c0)

    prod = mu * c0
    notes = ""
    if prod > 0.0:
        amp = math.sqrt(c0 / mu)
        rate = math.sqrt(prod)
        sgn = math.copysign(1.0, c0)

        def closed_form(z):
            return sgn * amp * np.tanh(rate * np.asarray(z, dtype=float))

        def closed_form_d(z):
            sech = 1.0 / np.cosh(rate * np.asarray(z, dtype=float))
            return c0 * sech * sech

        def closed_form_dd(z):
            x = rate * np.asarray(z, dtype=float)
            sech2 = 1.0 / np.cosh(x) ** 2
            return -2.0 * c0 * rate * sech2 * np.tanh(x)

        validity = (-10.0, 10.0)
        figure_tag = "monotone front between plateaus"
        notes = f"plateau amplitude sqrt(c0/mu) = {amp!r}; the front rises for c0 > 0 and falls for c0 < 0."
    elif c0 == 0.0:
        def closed_form(z):
            return 1.0 / (mu * np.asarray(z, dtype=float))

        def closed_form_d(z):
            zz = np.asarray(z, dtype=float)
            return -1.0 / (mu * zz * zz)

        def closed_form_dd(z):
            zz = np.asarray(z, dtype=float)
            return 2.0 / (mu * zz * zz * zz)

        validity = (0.0, 10.0)
        figure_tag = "algebraic decay branch"
        notes = "singular at zeta = 0; the mirror image covers zeta < 0."
    else:
        amp = math.sqrt(-c0 / mu)
        rate = math.sqrt(-prod)
        sgn = math.copysign(1.0, c0)

        def closed_form(z):
            return sgn * amp * np.tan(rate * np.asarray(z, dtype=float))

        def closed_form_d(z):
            cos = np.cos(rate * np.asarray(z, dtype=float))
            return c0 / (cos * cos)

        def closed_form_dd(z):
            x = rate * np.asarray(z, dtype=float)
            sec2 = 1.0 / np.cos(x) ** 2
            return 2.0 * c0 * rate * sec2 * np.tan(x)

        validity = (-0.5 * math.pi / rate, 0.5 * math.pi / rate)
        figure_tag = "blow-up arc between poles"
        notes = (
            "the tan branch carries sign(c0): "
            "u = sign(c0) sqrt(-c0/mu) tan(zeta sqrt(-mu c0)); without the "
            "sign the slope equals -eta(u) instead of eta(u)."
        )

    return CatalogEntry(
        name="burgers-huxley",
        parameters={"mu": mu, "c0": c0},
        ode=eta.ode,
        eta=eta,
        figure_tag=figure_tag,
        u_window=(0.2, 2.5),
        closed_form=closed_form,
        closed_form_d=closed_form_d,
        closed_form_dd=closed_form_dd,
        validity=validity,
        notes=notes,
    )


_BUILDERS: dict[str, Callable[..., CatalogEntry]] = {
    "fisher": fisher,
    "pendulum": pendulum,
    "sine-pendulum": sine_pendulum,
    "burgers-huxley": burgers_huxley,
}


def names() -> list[str]:
    """Registry keys in catalog order."""
    return list(_BUILDERS)


def parameter_schema(name: str) -> dict[str, float]:
    """Free parameters and their default values for one entry."""
    builder = _lookup(name)
    return {
        pname: p.default
        for pname, p in inspect.signature(builder).parameters.items()
    }


def describe(name: str) -> str:
    """The builder's documentation, covering parameters and closed-form cases."""
    return inspect.getdoc(_lookup(name)) or ""


def _lookup(name: str) -> Callable[..., CatalogEntry]:
    try:
        return _BUILDERS[name]
    except KeyError:
        known = ", ".join(_BUILDERS)
        raise ValueError(f"unknown catalog entry {name!r}; known entries: {known}") from None


def build(name: str, params: Mapping[str, float] | None = None) -> CatalogEntry:
    """Construct a catalog entry by registry name.

    Parameters not supplied fall back to the builder defaults; parameters
    the entry does not accept are rejected (ValueError), as are unknown
    entry names.
    """
    builder = _lookup(name)
    given = dict(params or {})
    accepted = set(inspect.signature(builder).parameters)
    unknown = sorted(set(given) - accepted)
    if unknown:
        raise ValueError(
            f"unknown parameter(s) {unknown} for catalog entry {name!r}; "
            f"accepted: {sorted(accepted)}"
        )
    return builder(**given)
