"""Integrability algebra for dissipative oscillators u'' + g(u) u' + h(u) = 0.

The substitution du/dzeta = eta(u) turns the oscillator into a second-kind
Abel equation

    eta deta/du + g(u) eta + h(u) = 0,

and eta(u) = 1/y(u) turns that into the first-kind form
dy/du = h y^3 + g y^2.  When the coefficient ratio satisfies the Chiellini
condition

    d/du (h/g) = k g,   k constant,

the Abel equation admits the explicit solution eta = c (h/g) with c any
real root of k c^2 + c + 1 = 0, and the first-kind equation separates in
the variable z = y h/g.

This module provides:

* the reduction and first-kind repackaging (`reduce_to_abel`,
  `to_first_kind`),
* a numerical test of the Chiellini condition on an interval
  (`classify_chiellini`),
* the root solver for k c^2 + c + 1 = 0 (`ck_roots`),
* three ways to produce an explicit eta: from a ratio already known to be
  Chiellini-integrable (`eta_from_ratio`), from a prescribed dissipation
  g with the restoring term constructed to match (`eta_from_g`), and from
  a prescribed restoring term h with g constructed (`eta_from_h`),
* the separated implicit relation of the first-kind equation and its
  residual (`abel_implicit_residual`, `separated_antiderivative`,
  `first_kind_cubic`),
* the nonlinear factorization eta = u phi1, phi2 = h/eta (`factorize`).

Antiderivatives needed by the constructions are computed symbolically for
polynomials and for sin/cos/exp with linear argument; anything else falls
back to adaptive quadrature from the left end of the working interval,
with the integration constant absorbed into c0 or c1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr
from .expr import (
    BinOp,
    Call,
    DomainError,
    Expr,
    Neg,
    Number,
    ScalarField,
    Var,
    const_value,
    fold_add,
    fold_div,
    fold_mul,
    fold_neg,
    fold_num,
    fold_pow,
    fold_sub,
)
from .quadrature import adaptive_gauss

__all__ = [
    "NoRealRoot",
    "EmptyDomain",
    "AllPointsSingular",
    "PoleError",
    "NonElementaryAntiderivative",
    "DissipativeOde",
    "AbelSecondKind",
    "AbelFirstKind",
    "ChielliniReport",
    "EtaField",
    "NumericField",
    "as_field",
    "reduce_to_abel",
    "to_first_kind",
    "classify_chiellini",
    "ck_roots",
    "eta_from_ratio",
    "eta_from_g",
    "eta_from_h",
    "second_kind_residual",
    "separated_antiderivative",
    "first_kind_cubic",
    "abel_implicit_residual",
    "factorize",
    "antiderivative",
]


class NoRealRoot(ValueError):
    """k c^2 + c + 1 = 0 has no real root (k > 1/4)."""


class EmptyDomain(ValueError):
    """The constructed radicand is negative over the whole working interval."""


class AllPointsSingular(ValueError):
    """Every classification sample point sits on a zero of g."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or too near) a pole of the separated antiderivative."""


class NonElementaryAntiderivative(ValueError):
    """The integrand is outside the closed-form antiderivative table."""


# ---------------------------------------------------------------------------
# Field plumbing


def as_field(f) -> ScalarField:
    """Coerce a string or Expr into a ScalarField; pass fields through."""
    if isinstance(f, ScalarField):
        return f
    if isinstance(f, (str, Expr)):
        return ScalarField(f)
    raise TypeError(f"expected expression text, Expr, or ScalarField, got {type(f).__name__}")


class NumericField:
    """Duck-typed stand-in for ScalarField built from callables.

    Used when a construction needs an antiderivative that has no entry in
    the closed-form table: the value comes from cumulative quadrature but
    the derivative is still exact (it is the integrand).
    """

    __slots__ = ("_fn", "_dfn", "text")

    def __init__(self, fn, dfn, text: str | None = None):
        self._fn = fn
        self._dfn = dfn
        self.text = text

    def __call__(self, u):
        return self._fn(u)

    def d(self, u):
        return self._dfn(u)

    def __repr__(self):
        return f"NumericField({self.text or '<quadrature>'})"


class _CumulativeIntegral:
    """integral from `base` to u of fn, with checkpoint reuse.

    Queries are integrated from the nearest previously computed point, so
    sweeping a grid costs one short panel per new point.
    """

    def __init__(self, fn, base: float):
        self._fn = fn
        self._known: dict[float, float] = {float(base): 0.0}

    def _scalar(self, u: float) -> float:
        known = self._known
        if u in known:
            return known[u]
        nearest = min(known, key=lambda q: abs(q - u))
        value = known[nearest] + adaptive_gauss(self._fn, nearest, u, target=1e-13)
        if len(known) < 4096:
            known[u] = value
        return value

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        if arr.ndim == 0:
            return self._scalar(float(arr))
        out = np.empty(arr.shape, dtype=float)
        flat = arr.ravel()
        order = np.argsort(flat)
        res = out.ravel()
        for i in order:
            res[i] = self._scalar(float(flat[i]))
        return out


# ---------------------------------------------------------------------------
# Symbolic antiderivatives (closed-form table)


def _poly_coeffs(e: Expr) -> dict[int, float] | None:
    """Coefficient map {degree: coef} if e is a polynomial in u, else None."""
    if isinstance(e, Number):
        return {0: e.value}
    if isinstance(e, Var):
        return {1: 1.0}
    if isinstance(e, Neg):
        inner = _poly_coeffs(e.arg)
        if inner is None:
            return None
        return {d: -c for d, c in inner.items()}
    if isinstance(e, BinOp):
        if e.op in "+-":
            left, right = _poly_coeffs(e.left), _poly_coeffs(e.right)
            if left is None or right is None:
                return None
            sgn = 1.0 if e.op == "+" else -1.0
            out = dict(left)
            for d, c in right.items():
                out[d] = out.get(d, 0.0) + sgn * c
            return out
        if e.op == "*":
            left, right = _poly_coeffs(e.left), _poly_coeffs(e.right)
            if left is None or right is None:
                return None
            out: dict[int, float] = {}
            for d1, c1 in left.items():
                for d2, c2 in right.items():
                    out[d1 + d2] = out.get(d1 + d2, 0.0) + c1 * c2
            return out
        if e.op == "/":
            denom = const_value(e.right)
            if denom is None or denom == 0.0:
                return None
            num = _poly_coeffs(e.left)
            if num is None:
                return None
            return {d: c / denom for d, c in num.items()}
        if e.op == "^":
            exponent = const_value(e.right)
            if exponent is None or exponent < 0 or exponent != int(exponent):
                return None
            base = _poly_coeffs(e.left)
            if base is None:
                return None
            out = {0: 1.0}
            for _ in range(int(exponent)):
                nxt: dict[int, float] = {}
                for d1, c1 in out.items():
                    for d2, c2 in base.items():
                        nxt[d1 + d2] = nxt.get(d1 + d2, 0.0) + c1 * c2
                out = nxt
            return out
        return None
    return None


def _linear_coeffs(e: Expr) -> tuple[float, float] | None:
    """(a, b) such that e = a*u + b, else None."""
    coeffs = _poly_coeffs(e)
    if coeffs is None:
        return None
    if any(d > 1 and c != 0.0 for d, c in coeffs.items()):
        return None
    return coeffs.get(1, 0.0), coeffs.get(0, 0.0)


def _poly_expr(coeffs: dict[int, float]) -> Expr:
    """Build a readable expression from a coefficient map, ascending degree."""
    acc: Expr | None = None
    for d in sorted(coeffs):
        c = coeffs[d]
        if c == 0.0:
            continue
        if d == 0:
            term: Expr = fold_num(abs(c))
        else:
            power = Var() if d == 1 else fold_pow(Var(), fold_num(d))
            term = fold_mul(fold_num(abs(c)), power)
        if acc is None:
            acc = term if c > 0 else fold_neg(term)
        elif c > 0:
            acc = fold_add(acc, term)
        else:
            acc = fold_sub(acc, term)
    return acc if acc is not None else Number(0.0)


def _poly_antiderivative(coeffs: dict[int, float]) -> Expr:
    return _poly_expr({d + 1: c / (d + 1) for d, c in coeffs.items()})


def _scale(c: float, e: Expr) -> Expr:
    """c * e with the constant pushed inward for readable output."""
    if c == 0.0:
        return Number(0.0)
    if c == 1.0:
        return e
    if c == -1.0:
        return fold_neg(e)
    ce = const_value(e)
    if ce is not None:
        return fold_num(c * ce)
    if isinstance(e, Neg):
        return _scale(-c, e.arg)
    if isinstance(e, BinOp):
        if e.op in "+-":
            left, right = _scale(c, e.left), _scale(c, e.right)
            return fold_add(left, right) if e.op == "+" else fold_sub(left, right)
        if e.op == "*":
            for const_side, other in ((e.left, e.right), (e.right, e.left)):
                cc = const_value(const_side)
                if cc is not None:
                    return _scale(c * cc, other)
        if e.op == "/":
            cc = const_value(e.right)
            if cc is not None and cc != 0.0:
                return _scale(c / cc, e.left)
    return fold_mul(fold_num(c), e)


def _affine_combo(constant: float, factor: float, base: Expr) -> Expr:
    """constant + factor * base, flattened to one polynomial when base is one."""
    coeffs = _poly_coeffs(base)
    if coeffs is not None:
        scaled = {d: factor * c for d, c in coeffs.items()}
        scaled[0] = scaled.get(0, 0.0) + constant
        return _poly_expr(scaled)
    return fold_add(fold_num(constant), _scale(factor, base))


def antiderivative(e: Expr) -> Expr:
    """Closed-form antiderivative of e in u, up to an additive constant.

    Supported: polynomials (in expanded or factored form), sin/cos/exp of
    a linear argument, and sums, differences, negations, and constant
    multiples of those.  Raises NonElementaryAntiderivative otherwise.
    """
    coeffs = _poly_coeffs(e)
    if coeffs is not None:
        return _poly_antiderivative(coeffs)
    if isinstance(e, Neg):
        return fold_neg(antiderivative(e.arg))
    if isinstance(e, BinOp):
        if e.op in "+-":
            left = antiderivative(e.left)
            right = antiderivative(e.right)
            return fold_add(left, right) if e.op == "+" else fold_sub(left, right)
        if e.op == "*":
            for const_side, other in ((e.left, e.right), (e.right, e.left)):
                c = const_value(const_side)
                if c is not None:
                    return fold_mul(fold_num(c), antiderivative(other))
        if e.op == "/":
            c = const_value(e.right)
            if c is not None and c != 0.0:
                return fold_div(antiderivative(e.left), fold_num(c))
    if isinstance(e, Call) and e.fn in ("sin", "cos", "exp"):
        lin = _linear_coeffs(e.arg)
        if lin is not None and lin[0] != 0.0:
            a = lin[0]
            if e.fn == "sin":
                return fold_div(fold_neg(Call("cos", e.arg)), fold_num(a))
            if e.fn == "cos":
                return fold_div(Call("sin", e.arg), fold_num(a))
            return fold_div(Call("exp", e.arg), fold_num(a))
    raise NonElementaryAntiderivative(
        f"no closed-form antiderivative for {expr.render(e)!r}; "
        "quadrature fallback requires a working interval"
    )


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class DissipativeOde:
    """The oscillator u'' + g(u) u' + h(u) = 0."""

    g: ScalarField
    h: ScalarField

    @classmethod
    def from_text(cls, g: str, h: str) -> "DissipativeOde":
        return cls(ScalarField(g), ScalarField(h))


@dataclass(frozen=True)
class AbelSecondKind:
    """Coefficients of eta deta/du + g eta + h = 0."""

    g: ScalarField
    h: ScalarField


@dataclass(frozen=True)
class AbelFirstKind:
    """dy/du = cubic(u) y^3 + quadratic(u) y^2 (no linear or free term)."""

    cubic: ScalarField
    quadratic: ScalarField


@dataclass(frozen=True)
class ChielliniReport:
    """Result of the pointwise Chiellini-constant estimate."""

    k: float
    residual: float
    verdict: str  # "Integrable" | "NotIntegrable" | "Indeterminate"
    ck_roots: list[float]
    grid_used: list[float]


@dataclass(frozen=True)
class EtaField:
    """An explicit Abel solution eta(u) with its construction metadata.

    `eta` is a ScalarField when the construction stayed inside the symbolic
    antiderivative table, else a NumericField (exact derivative, quadrature
    values).  `ode` is the oscillator this eta solves: for the construction
    paths it includes the companion coefficient built alongside eta.
    `domain` lists the maximal u-intervals on which eta is real, when the
    construction had to restrict (square-root radicands); None means no
    restriction was detected.
    """

    eta: ScalarField | NumericField
    provenance: str  # "ratio" | "from_g" | "from_h"
    constants: dict[str, float]
    ode: DissipativeOde
    domain: tuple[tuple[float, float], ...] | None = None

    def __call__(self, u):
        return self.eta(u)

    def d(self, u):
        return self.eta.d(u)

    @property
    def text(self) -> str | None:
        return self.eta.text


# ---------------------------------------------------------------------------
# Reductions


def reduce_to_abel(ode: DissipativeOde) -> AbelSecondKind:
    """Identify the oscillator with its second-kind Abel equation.

    The coefficients carry over unchanged; the content is the documented
    semantics du/dzeta = eta(u(zeta)).
    """
    return AbelSecondKind(g=ode.g, h=ode.h)


def to_first_kind(abel: AbelSecondKind) -> AbelFirstKind:
    """Repackage via eta = 1/y into dy/du = h y^3 + g y^2."""
    return AbelFirstKind(cubic=abel.h, quadratic=abel.g)


# ---------------------------------------------------------------------------
# Classification


def ck_roots(k: float) -> list[float]:
    """Real roots of k c^2 + c + 1 = 0, in stable form.

    Returns [] for k > 1/4 (complex pair), one root for k = 0 (the linear
    degeneration) and for k = 1/4 (double root -2), two roots otherwise,
    ordered [minus-branch, plus-branch].
    """
    k = float(k)
    if k > 0.25:
        return []
    if k == 0.0:
        return [-1.0]
    if k == 0.25:
        return [-2.0]
    sq = math.sqrt(1.0 - 4.0 * k)
    minus = (-1.0 - sq) / (2.0 * k)
    plus = -2.0 / (1.0 + sq)
    return [minus, plus]


def classify_chiellini(ode: DissipativeOde, interval: tuple[float, float], n: int = 16) -> ChielliniReport:
    """Estimate the Chiellini constant k from (h/g)' = k g on an interval.

    Parameters
    ----------
    ode : DissipativeOde
    interval : (float, float)
        Working u-interval, positive length.
    n : int
        Number of Chebyshev-distributed sample points, at least 16.

    Returns
    -------
    ChielliniReport
        k is the median of the pointwise estimates (h/g)'/g over
        non-singular samples; residual is max |k_i - k| / (1 + |k|);
        verdict is Integrable when residual <= 1e-8, NotIntegrable when
        residual > 1e-4, Indeterminate between.

    Raises
    ------
    AllPointsSingular
        When every sample point has |g| below the singularity threshold
        eps_g = 1e-9 (1 + max|g|) or fails to evaluate.

    Notes
    -----
    The derivative of h/g is symbolic (module expr), so the tolerance is
    free of finite-difference step tuning.  The median keeps a few
    near-singular samples from polluting the estimate.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        raise ValueError(f"interval must have positive length, got ({lo!r}, {hi!r})")
    if n < 16:
        raise ValueError(f"need at least 16 sample points, got {n}")
    j = np.arange(n)
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * (2.0 * j + 1.0) / (2.0 * n))
    nodes = np.sort(nodes)

    ratio = ScalarField(BinOp("/", ode.h.expr, ode.g.expr))
    g_vals = np.full(n, np.nan)
    for i, u in enumerate(nodes):
        try:
            g_vals[i] = ode.g(float(u))
        except DomainError:
            continue
    finite = np.isfinite(g_vals)
    if not finite.any():
        raise AllPointsSingular(f"g failed to evaluate anywhere on [{lo!r}, {hi!r}]")
    eps_g = 1e-9 * (1.0 + float(np.max(np.abs(g_vals[finite]))))

    estimates = []
    grid_used = []
    for i, u in enumerate(nodes):
        if not finite[i] or abs(g_vals[i]) < eps_g:
            continue
        try:
            slope = ratio.d(float(u))
        except DomainError:
            continue
        estimates.append(slope / g_vals[i])
        grid_used.append(float(u))
    if not estimates:
        raise AllPointsSingular(
            f"every sample point on [{lo!r}, {hi!r}] has |g| < {eps_g:.3e} or is singular"
        )
    k = float(np.median(estimates))
    residual = float(max(abs(ki - k) for ki in estimates) / (1.0 + abs(k)))
    if residual <= 1e-8:
        verdict = "Integrable"
    elif residual > 1e-4:
        verdict = "NotIntegrable"
    else:
        verdict = "Indeterminate"
    return ChielliniReport(k=k, residual=residual, verdict=verdict,
                           ck_roots=ck_roots(k), grid_used=grid_used)


# ---------------------------------------------------------------------------
# Explicit eta constructions


def _pick_root(k: float, root_choice: str) -> float:
    roots = ck_roots(k)
    if not roots:
        raise NoRealRoot(f"k c^2 + c + 1 = 0 has no real root for k = {k!r} > 1/4")
    if len(roots) == 1:
        return roots[0]
    choice = root_choice.lower()
    if choice == "minus":
        return roots[0]
    if choice == "plus":
        return roots[1]
    raise ValueError(f"root_choice must be 'minus' or 'plus', got {root_choice!r}")


def eta_from_ratio(ode: DissipativeOde, k: float, root_choice: str = "minus") -> EtaField:
    """eta = c_k h/g for an oscillator already satisfying (h/g)' = k g.

    The caller asserts integrability (use classify_chiellini first); this
    just scales the symbolic quotient by the chosen root.  Evaluation at
    zeros of g raises DomainError, marking the quotient's singular points.
    """
    c = _pick_root(k, root_choice)
    eta_expr = _scale(c, BinOp("/", ode.h.expr, ode.g.expr))
    return EtaField(
        eta=ScalarField(eta_expr),
        provenance="ratio",
        constants={"k": float(k), "ckRoot": c},
        ode=ode,
    )


def _antiderivative_field(f: ScalarField, interval: tuple[float, float] | None):
    """Symbolic antiderivative when possible, else cumulative quadrature."""
    try:
        return ScalarField(antiderivative(f.expr))
    except NonElementaryAntiderivative:
        if interval is None:
            raise
        cumulative = _CumulativeIntegral(f, float(interval[0]))
        return NumericField(cumulative, f, text=None)


def eta_from_g(g, k: float = -2.0, c0: float = 0.0, ck_root: float | None = None,
               interval: tuple[float, float] | None = (-5.0, 5.0)) -> EtaField:
    """Construct eta and the matching restoring term from a dissipation g.

    eta = c_k (c0 + k G) with G an antiderivative of g, and the companion
    h = g (c0 + k G) closes the oscillator so that (h/g)' = k g by
    construction.

    Parameters
    ----------
    g : str, Expr, or ScalarField
    k : float
        Chiellini constant to build in; default -2, the convention under
        which c_k = 1 is available.
    c0 : float
        Integration constant of G.
    ck_root : float, optional
        Root of k c^2 + c + 1 = 0 to scale by; default is the minus
        branch root for the given k.
    interval : (float, float), optional
        Working interval; only used as the quadrature base when g has no
        closed-form antiderivative (the constant shift is absorbed by c0).
    """
    g = as_field(g)
    if ck_root is None:
        ck_root = _pick_root(k, "minus")
    big_g = _antiderivative_field(g, interval)
    if isinstance(big_g, ScalarField):
        w_expr = _affine_combo(c0, k, big_g.expr)
        eta_field = ScalarField(_scale(ck_root, w_expr))
        h_field = ScalarField(fold_mul(g.expr, w_expr))
    else:
        def w_fn(u, _G=big_g, _k=k, _c0=c0):
            return _c0 + _k * _G(u)

        eta_field = NumericField(
            lambda u: ck_root * w_fn(u),
            lambda u: ck_root * k * g(u),
        )
        h_field = NumericField(
            lambda u: g(u) * w_fn(u),
            lambda u: g.d(u) * w_fn(u) + g(u) * k * g(u),
        )
    return EtaField(
        eta=eta_field,
        provenance="from_g",
        constants={"k": float(k), "ckRoot": float(ck_root), "c0": float(c0)},
        ode=DissipativeOde(g=g, h=h_field),
    )


def _positive_runs(fn, lo: float, hi: float, samples: int = 2049) -> tuple[tuple[float, float], ...]:
    """Maximal subintervals of [lo, hi] where fn > 0, located by bisection."""
    us = np.linspace(lo, hi, samples)
    vals = np.empty(samples)
    for i, u in enumerate(us):
        try:
            vals[i] = fn(float(u))
        except DomainError:
            vals[i] = np.nan
    pos = np.isfinite(vals) & (vals > 0.0)
    if not pos.any():
        return ()

    def edge(a: float, b: float) -> float:
        # fn(a) and fn(b) straddle zero; return the crossing
        fa = fn(a)
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = fn(m)
            if (fm > 0.0) == (fa > 0.0):
                a, fa = m, fm
            else:
                b = m
            if abs(b - a) <= 1e-13 * (1.0 + abs(a)):
                break
        return 0.5 * (a + b)

    runs = []
    i = 0
    while i < samples:
        if not pos[i]:
            i += 1
            continue
        j = i
        while j + 1 < samples and pos[j + 1]:
            j += 1
        left = us[i] if i == 0 or not np.isfinite(vals[i - 1]) else edge(float(us[i]), float(us[i - 1]))
        right = us[j] if j == samples - 1 or not np.isfinite(vals[j + 1]) else edge(float(us[j]), float(us[j + 1]))
        runs.append((float(left), float(right)))
        i = j + 1
    return tuple(runs)


def eta_from_h(h, k: float = -2.0, c1: float = 0.0, ck_root: float | None = None,
               sign: float = 1.0, interval: tuple[float, float] = (-5.0, 5.0)) -> EtaField:
    """Construct eta and the matching dissipation from a restoring term h.

    eta = sign * c_k * sqrt(c1 + 2 k H) with H an antiderivative of h; the
    companion dissipation g = h / (sign * sqrt(c1 + 2 k H)) closes the
    oscillator with (h/g)' = k g.

    The square root restricts u to where the radicand is positive; the
    admissible runs inside `interval` are recorded on the result.  When the
    radicand is positive nowhere on the interval, EmptyDomain is raised.

    Raises
    ------
    EmptyDomain
    NoRealRoot (via default root lookup for k > 1/4)
    """
    h = as_field(h)
    if ck_root is None:
        ck_root = _pick_root(k, "minus")
    sign = 1.0 if sign >= 0 else -1.0
    big_h = _antiderivative_field(h, interval)
    if isinstance(big_h, ScalarField):
        rad_expr = _affine_combo(c1, 2.0 * k, big_h.expr)
        rad_field = ScalarField(rad_expr)
        sqrt_expr = Call("sqrt", rad_expr)
        eta_field = ScalarField(_scale(sign * ck_root, sqrt_expr))
        g_field = ScalarField(BinOp("/", h.expr, _scale(sign, sqrt_expr)))
    else:
        def rad_fn(u, _H=big_h, _k=k, _c1=c1):
            return _c1 + 2.0 * _k * _H(u)

        rad_field = NumericField(rad_fn, lambda u: 2.0 * k * h(u))

        def eta_fn(u):
            r = rad_fn(u)
            r_arr = np.asarray(r)
            if np.any(r_arr < 0.0):
                raise DomainError(f"radicand negative at u = {u!r}")
            return sign * ck_root * np.sqrt(r)

        eta_field = NumericField(
            eta_fn,
            lambda u: sign * ck_root * k * h(u) / np.sqrt(rad_fn(u)),
        )
        g_field = NumericField(
            lambda u: h(u) / (sign * np.sqrt(rad_fn(u))),
            lambda u: (h.d(u) * rad_fn(u) - k * h(u) ** 2) / (sign * rad_fn(u) ** 1.5),
        )
    lo, hi = float(interval[0]), float(interval[1])
    runs = _positive_runs(rad_field, lo, hi)
    if not runs:
        raise EmptyDomain(
            f"c1 + 2k*H(u) = {c1!r} + {2.0 * k!r}*H is positive nowhere on [{lo!r}, {hi!r}]"
        )
    return EtaField(
        eta=eta_field,
        provenance="from_h",
        constants={"k": float(k), "ckRoot": float(ck_root), "c1": float(c1),
                   "sign": sign},
        ode=DissipativeOde(g=g_field, h=h),
        domain=runs,
    )


def second_kind_residual(eta: EtaField, u) -> np.ndarray:
    """|eta eta' + g eta + h| / (1 + |h|) pointwise: the defining residual."""
    u = np.asarray(u, dtype=float)
    ev = np.asarray(eta(u), dtype=float)
    dv = np.asarray(eta.d(u), dtype=float)
    gv = np.asarray(eta.ode.g(u), dtype=float)
    hv = np.asarray(eta.ode.h(u), dtype=float)
    return np.abs(ev * dv + gv * ev + hv) / (1.0 + np.abs(hv))


# ---------------------------------------------------------------------------
# Separated implicit relation of the first-kind equation


def separated_antiderivative(k: float):
    """Antiderivative L(z) of 1/(z (z^2 + z + k)) and its pole locations.

    Returns (L, poles) where L is a scalar callable and poles is the tuple
    of real z at which the integrand blows up.  Three regimes:

    * k < 1/4, k != 0: three real simple poles; pure logarithms from the
      partial fractions 1/k / z + 1/(z1 s) / (z - z1) - 1/(z2 s) / (z - z2)
      with z1,2 = (-1 +- s)/2, s = sqrt(1 - 4k).
    * k = 1/4: double pole at -1/2; 4 ln|z| - 4 ln|z + 1/2| + 2/(z + 1/2).
    * k > 1/4: complex quadratic pair; (1/k)(ln|z| - ln(z^2+z+k)/2
      - arctan((2z+1)/s)/s) with s = sqrt(4k - 1).

    k = 0 is rejected: the cubic degenerates to z^2 (z + 1) and the
    separated relation it belongs to has no 1/k normalization.
    """
    k = float(k)
    if k == 0.0:
        raise ValueError("k = 0 degenerates the separated relation (no 1/k branch)")
    if k > 0.25:
        s = math.sqrt(4.0 * k - 1.0)

        def antider(z: float) -> float:
            return (math.log(abs(z)) - 0.5 * math.log(z * z + z + k)
                    - math.atan((2.0 * z + 1.0) / s) / s) / k

        return antider, (0.0,)
    if k == 0.25:
        def antider(z: float) -> float:
            return 4.0 * math.log(abs(z)) - 4.0 * math.log(abs(z + 0.5)) + 2.0 / (z + 0.5)

        return antider, (0.0, -0.5)
    s = math.sqrt(1.0 - 4.0 * k)
    z1 = 0.5 * (-1.0 + s)
    z2 = 0.5 * (-1.0 - s)

    def antider(z: float) -> float:
        return (math.log(abs(z)) / k
                + math.log(abs(z - z1)) / (z1 * s)
                - math.log(abs(z - z2)) / (z2 * s))

    return antider, (0.0, z1, z2)


def first_kind_cubic(z, k: float):
    """z (z^2 + z + k): the separable factor of the z-equation.

    Its real roots are the constant solutions z(u) = const; for k < 1/4
    the two quadratic roots are the fixed points the Chiellini solutions
    land on.
    """
    z = np.asarray(z, dtype=float)
    out = z * (z * z + z + float(k))
    return float(out) if out.ndim == 0 else out


def abel_implicit_residual(z: float, k: float, h_over_g: float, branch_constant: float) -> float:
    """Residual of the separated implicit solution L(z) = ln|h/g| / k + const.

    Zero along exact solutions of the first-kind equation in the scaled
    variable z = y h/g.  Raises PoleError when z sits within 1e-12 of a
    pole of L, and ValueError for h_over_g = 0 or k = 0 (the relation
    normalizes by 1/k).
    """
    z = float(z)
    if h_over_g == 0.0:
        raise ValueError("h/g must be nonzero along the trajectory")
    antider, poles = separated_antiderivative(k)
    for p in poles:
        if abs(z - p) <= 1e-12 * (1.0 + abs(z)):
            raise PoleError(f"z = {z!r} is at a pole (z = {p!r}) of the separated antiderivative")
    return antider(z) - math.log(abs(h_over_g)) / float(k) - float(branch_constant)


# ---------------------------------------------------------------------------
# Factorization


def factorize(ode: DissipativeOde, eta: EtaField,
              interval: tuple[float, float] | None = None, samples: int = 128):
    """Split the oscillator through eta = u phi1: returns (phi1, phi2).

    phi1 = eta/u and phi2 = h/eta satisfy phi1 phi2 = h/u and
    phi1 + phi2 = -phi1' u - g whenever eta solves the second-kind Abel
    equation.  When `interval` is given, both identities are checked on a
    grid there and a ValueError reports the worst deviation if either
    exceeds 1e-8.

    Evaluating phi2 where eta vanishes (with h nonzero) raises DomainError,
    which is the correct signal: the factorization degenerates at turning
    points.
    """
    if isinstance(eta.eta, ScalarField):
        phi1 = ScalarField(BinOp("/", eta.eta.expr, Var()))
        phi2 = ScalarField(BinOp("/", ode.h.expr, eta.eta.expr))
    else:
        ef = eta.eta
        phi1 = NumericField(
            lambda u: ef(u) / u,
            lambda u: (ef.d(u) * u - ef(u)) / (np.asarray(u, dtype=float) ** 2),
        )
        phi2 = NumericField(
            lambda u: ode.h(u) / ef(u),
            lambda u: (ode.h.d(u) * ef(u) - ode.h(u) * ef.d(u)) / ef(u) ** 2,
        )
    if interval is not None:
        us = np.linspace(interval[0], interval[1], samples)
        p1 = np.asarray(phi1(us), dtype=float)
        dp1 = np.asarray(phi1.d(us), dtype=float)
        p2 = np.asarray(phi2(us), dtype=float)
        gv = np.asarray(ode.g(us), dtype=float)
        hv = np.asarray(ode.h(us), dtype=float)
        product = np.max(np.abs(p1 * p2 - hv / us))
        composed = np.max(np.abs(p1 * (p1 + dp1 * us) + gv * p1 + hv / us))
        summed = np.max(np.abs(p1 + p2 + dp1 * us + gv))
        worst = max(product, composed, summed)
        if worst > 1e-8:
            raise ValueError(
                f"factorization identities violated on [{interval[0]!r}, {interval[1]!r}]: "
                f"worst residual {worst:.3e} (eta is not a solution there)"
            )
    return phi1, phi2
