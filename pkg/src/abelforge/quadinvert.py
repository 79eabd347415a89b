"""Trajectory reconstruction by quadrature of du/dzeta = eta(u).

Along an arc where eta keeps one sign, zeta(u) = zeta_0 + integral du/eta
is monotone and u(zeta) follows by inversion.  The interesting part is what
happens where eta vanishes.  Writing the second-kind Abel relation
eta eta' = -(g eta + h) at a zero u_b of eta:

* h(u_b) != 0: eta^2 vanishes linearly, the arc reaches u_b in finite time
  sqrt(2 delta / |h|) from distance delta, and the motion folds back (a
  turning point; u' changes sign, |u'| = |eta| still).
* h(u_b) == 0: u_b is an equilibrium; the approach time diverges and the
  trajectory only asymptotes toward it.  No event is emitted, the samples
  simply flatten.

A third case is a boundary where eta stops being evaluable while still
bounded away from zero (the admissible window of a construction ends);
the arc arrives there at finite speed and stops (DomainEdge).

`invert` walks the zeta sample grid through any number of such arcs
(turning points up to a budget per direction), `quadrature_map` is the
one-shot monotone map, and `rk4_reference` provides an independent
fixed-step integration of the underlying oscillator for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import DomainError
from .quadrature import QuadratureFailure, adaptive_gauss, tanh_sinh

__all__ = [
    "InteriorZero",
    "SolutionCurve",
    "quadrature_map",
    "invert",
    "rk4_reference",
]

_WALL_OFFSET = 1e-9      # u-distance from a fold wall where the sqrt tail takes over
_INVERT_TOL = 1e-12      # relative tolerance on zeta when solving tau(u) = target
_EQUILIBRIUM_H = 1e-9    # |h| below this (scaled) at a wall means equilibrium
_EQ_CAP = 1e-4           # u-distance from an equilibrium where quadrature hands
                         # over to the linearized exponential settling model


class InteriorZero(ValueError):
    """eta vanishes strictly inside the requested monotone map interval."""


@dataclass(frozen=True)
class SolutionCurve:
    """Sampled trajectory with its branch events.

    samples : list of (zeta, u, uPrime), zeta strictly increasing
    events : list of (zeta, kind), kind in {"TurningPoint", "DomainEdge",
        "Truncated"}
    """

    samples: list
    events: list
    base_zeta: float
    base_u: float

    def arrays(self):
        """(zeta, u, uPrime) as three aligned float arrays."""
        if not self.samples:
            z = np.empty(0)
            return z, z.copy(), z.copy()
        a = np.asarray(self.samples, dtype=float)
        return a[:, 0], a[:, 1], a[:, 2]


def _speed(eta, u: float) -> float | None:
    """|eta(u)| or None when eta is not evaluable / not finite there."""
    try:
        v = float(eta(u))
    except (DomainError, ValueError, OverflowError, ZeroDivisionError):
        return None
    if not math.isfinite(v):
        return None
    return abs(v)


def _signed(eta, u: float) -> float | None:
    try:
        v = float(eta(u))
    except (DomainError, ValueError, OverflowError, ZeroDivisionError):
        return None
    return v if math.isfinite(v) else None


def _golden_min(f, a: float, b: float) -> tuple[float, float]:
    """Golden-section minimum of |eta| on [a, b].

    A point where eta stops being evaluable counts as a zero: the only way
    the refinement of a bracketed minimum runs into an invalid point is
    that eta^2 has descended into (possibly sign-flipping) roundoff noise.
    """
    phi = 0.5 * (math.sqrt(5.0) - 1.0)
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(140):
        if f1 is None:
            return x1, 0.0
        if f2 is None:
            return x2, 0.0
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = f(x2)
        if b - a <= 1e-15 * (1.0 + abs(a)):
            break
    mid = 0.5 * (a + b)
    fm = f(mid)
    return mid, (0.0 if fm is None else fm)


def _arrival_coefficient(eta, u_wall: float, d: float, room: float) -> float:
    """A = lim (eta^2)'/2 taken from inside a fold wall (u = u_wall - d*delta).

    The fold tail is eta^2 = 2 A delta + O(delta^2), so arrival from
    distance delta takes sqrt(2 delta / A).  By the Abel identity A equals
    |g eta + h| at the wall, which is NOT |h(u_wall)| whenever g blows up
    there: a ratio-companion field (g = h/eta) has g eta -> h, doubling
    the coefficient.  Measuring from eta itself is provenance-agnostic.
    Linear bias in the probe distance is removed by one Richardson step.
    """
    d1 = min(2e-6 * (1.0 + abs(u_wall)), 0.25 * room)
    while d1 > 0.0:
        d2 = 0.5 * d1
        s1 = _speed(eta, u_wall - d * d1)
        s2 = _speed(eta, u_wall - d * d2)
        if s1 and s2:
            a1 = s1 * s1 / (2.0 * d1)
            a2 = s2 * s2 / (2.0 * d2)
            return abs(2.0 * a2 - a1)
        d1 *= 1e-2
        if d1 < 1e-13 * (1.0 + abs(u_wall)):
            break
    return 0.0


class _Arc:
    """One monotone stretch of the motion, parameterized by arc length.

    Points are u = u_from + d * ell, ell >= 0.  tau(ell) is the travel
    time, integrated on demand from the last checkpoint.  When the arc
    starts at a fold wall (after a turning point) the first _WALL_OFFSET
    of travel time uses the analytic sqrt tail instead of quadrature.
    """

    def __init__(self, eta, u_from: float, d: float, start_wall_h: float | None = None):
        self.eta = eta
        self.u_from = float(u_from)
        self.d = float(d)
        self.start_wall_h = start_wall_h
        if start_wall_h is not None:
            self._ell0 = _WALL_OFFSET * (1.0 + abs(u_from))
            self._tau0 = math.sqrt(2.0 * self._ell0 / start_wall_h)
        else:
            self._ell0 = 0.0
            self._tau0 = 0.0
        self._ck_ell = self._ell0
        self._ck_tau = self._tau0
        self._rad_scale = 1.0
        # filled in by survey(): arc end data
        self.wall_ell: float | None = None
        self.wall_kind: str | None = None
        self.wall_h: float = 0.0
        self.cap_ell: float = 0.0
        self.cap_tau: float = 0.0
        self.wall_tau: float | None = None
        self.cap_slope: float | None = None

    # -- raw machinery

    def _inv_speed(self, u):
        v = np.abs(np.asarray(self.eta(np.asarray(u, dtype=float)), dtype=float))
        return 1.0 / v

    def tau(self, ell: float) -> float:
        """Travel time from the arc start to arc length ell.

        Integrated in u rather than in arc length: the quadrature's
        node-jitter floor keys on the abscissa magnitude, and u is where
        the double-precision quantization actually lives (arc lengths near
        zero look infinitely resolvable but u_from + ell is not).
        """
        if ell < self._ell0:
            if self.start_wall_h is None:
                raise ValueError("arc length must be nonnegative")
            return math.sqrt(2.0 * max(ell, 0.0) / self.start_wall_h)
        if ell != self._ck_ell:
            u_a = self.u_from + self.d * self._ck_ell
            u_b = self.u_from + self.d * ell
            if u_a != u_b:
                self._ck_tau += self.d * adaptive_gauss(
                    self._inv_speed, u_a, u_b, target=1e-13,
                    inv_sqrt_noise=2e-16 * self._rad_scale)
            self._ck_ell = ell
        return self._ck_tau

    # -- wall discovery

    def survey(self, needed_tau: float) -> None:
        """Find what ends this arc, looking far enough to cover needed_tau.

        Sets wall_kind to "turn" (fold, finite time, motion continues
        mirrored), "edge" (evaluation boundary reached at finite speed,
        motion stops), or None meaning the arc covers needed_tau without
        incident (equilibrium asymptote or simply long); cap_ell/cap_tau
        always bound the solvable range.
        """
        window = max(2.0, 2.0 * (1.0 + abs(self.u_from)))
        guard = self._ell0 if self._ell0 > 0.0 else 1e-12 * (1.0 + abs(self.u_from))
        first_scan = True
        while True:
            ells = np.linspace(guard, window, 4097)
            sgn = 0.0
            blocked = None  # (ell_ok, ell_bad) bracket around the first obstruction
            prev_ok = None
            vals = np.full(ells.shape, np.nan)
            n_ok = 0
            for i, ell in enumerate(ells):
                v = _signed(self.eta, self.u_from + self.d * float(ell))
                if v is not None:
                    vals[i] = v
                ok = v is not None and v != 0.0 and (sgn == 0.0 or (v > 0) == (sgn > 0))
                if ok and sgn == 0.0:
                    sgn = 1.0 if v > 0 else -1.0
                if not ok:
                    blocked = (prev_ok if prev_ok is not None else 0.0, float(ell))
                    break
                prev_ok = float(ell)
                n_ok = i + 1
            # |eta|^2 ~ the term scale of the radicand eta is built from; it
            # feeds the evaluation-noise floor of the tau quadrature.  The
            # floor only matters where eta nearly vanishes (cancellation),
            # so take the peak from the first bounded window and from any
            # scan that actually contains a wall.  A clean expanded window
            # must not contribute: on a growing arc its peak inflates the
            # floor until near-origin panels are accepted as pure noise.
            peak = float(np.max(np.abs(vals[:n_ok]))) if n_ok else 0.0
            if first_scan:
                self._rad_scale = max(self._rad_scale, peak * peak)
                first_scan = False
            # an even-order zero (equilibrium touch) never trips the sign or
            # validity checks; hunt for it among local minima of |eta| on
            # the clean prefix, since it may sit before any blockage
            ell_touch = self._first_touch(ells[:n_ok], vals[:n_ok])
            if ell_touch is not None or blocked is not None:
                self._rad_scale = max(self._rad_scale, peak * peak)
            if ell_touch is not None:
                self._finish_survey(ell_touch, needed_tau)
                return
            if blocked is not None:
                ell_wall = self._bisect_boundary(blocked[0], blocked[1], sgn)
                self._finish_survey(ell_wall, needed_tau)
                return
            cap = float(window)
            tau_cap = self.tau(cap)
            if tau_cap >= needed_tau or window > 1e8:
                self.wall_ell = None
                self.wall_kind = None
                self.cap_ell = cap
                self.cap_tau = tau_cap
                # rewind the tau checkpoint: later queries start near the
                # arc origin, and an incremental leg back from a far cap
                # would retraverse the whole range for every sample
                self._ck_ell, self._ck_tau = self._ell0, self._tau0
                return
            window *= 4.0

    def _first_touch(self, ells, vals) -> float | None:
        """Nearest even-order zero of eta among grid local minima of |vals|."""
        if len(ells) < 3:
            return None
        mags = np.abs(vals)
        scale = float(np.max(mags))
        if scale == 0.0:
            return None
        interior = np.arange(1, len(ells) - 1)
        is_min = (mags[interior] <= mags[interior - 1]) & (mags[interior] <= mags[interior + 1])
        for i in interior[is_min & (mags[interior] < 0.2 * scale)]:
            ell, s = _golden_min(
                lambda e: _speed(self.eta, self.u_from + self.d * e),
                float(ells[i - 1]), float(ells[i + 1]))
            if s is not None and s <= 1e-8 * (1.0 + scale):
                return ell
        return None

    def _bisect_boundary(self, ok: float, bad: float, sgn: float) -> float:
        for _ in range(120):
            mid = 0.5 * (ok + bad)
            if mid <= ok or mid >= bad:
                break
            v = _signed(self.eta, self.u_from + self.d * mid)
            good = v is not None and v != 0.0
            if good and sgn != 0.0:
                good = (v > 0) == (sgn > 0)
            if good:
                ok = mid
            else:
                bad = mid
        return 0.5 * (ok + bad)

    def _finish_survey(self, ell_wall: float, needed_tau: float) -> None:
        u_wall = self.u_from + self.d * ell_wall
        u_scale = 1.0 + abs(u_wall)
        probe = _WALL_OFFSET * u_scale
        s_in = _speed(self.eta, u_wall - self.d * probe)
        scale = 1.0 + abs(_signed(self.eta, self.u_from + self.d * self._ell0) or 0.0)
        self.wall_ell = ell_wall
        if s_in is not None and s_in > 1e-3 * scale:
            # evaluation window ends while the motion still has speed
            self.wall_kind = "edge"
            self.cap_ell = ell_wall
            self.cap_tau = self.tau(ell_wall)
            self.wall_tau = self.cap_tau
            return
        if self._is_fold(ell_wall, u_wall):
            wall_h = _arrival_coefficient(self.eta, u_wall, self.d,
                                          ell_wall - self._ell0)
            if wall_h <= 0.0:
                # tail coefficient unmeasurable: arrive and stop
                self.wall_kind = "edge"
                self.cap_ell = ell_wall
                self.cap_tau = self.tau(ell_wall)
                self.wall_tau = self.cap_tau
                return
            self.wall_kind = "turn"
            self.wall_h = wall_h
            cap = ell_wall - probe
            if cap <= self._ell0:
                cap = 0.5 * (self._ell0 + ell_wall)
            self.cap_ell = cap
            self.cap_tau = self.tau(cap)
            self.wall_tau = self.cap_tau + math.sqrt(2.0 * (ell_wall - cap) / self.wall_h)
        else:
            # equilibrium: approach time diverges, arc never ends.  The cap
            # must stay outside the zone where eta^2 is evaluation noise:
            # near a zero of order p the true eta^2 ~ delta^(2p) while its
            # evaluation carries an absolute roundoff floor, so close to a
            # double zero the integrand 1/|eta| degrades into noise that no
            # splitting resolves.  _EQ_CAP keeps the quadrature comfortably
            # conditioned; past the cap the marcher switches to the
            # linearized settling model delta(t) = delta_cap exp(-a t) with
            # a = eta(cap)/delta_cap, whose position error is O(delta_cap^2).
            self.wall_kind = None
            cap = ell_wall - max(_EQ_CAP * u_scale, 4.0 * np.spacing(abs(u_wall)))
            if cap <= self._ell0:
                cap = 0.5 * (self._ell0 + ell_wall)
            self.cap_ell = cap
            self.cap_tau = self.tau(cap)
            delta = ell_wall - cap
            s_cap = _speed(self.eta, u_wall - self.d * delta)
            self.cap_slope = (s_cap / delta) if (s_cap and delta > 0.0) else None

    def _is_fold(self, ell_wall: float, u_wall: float) -> bool:
        """Fold wall (eta ~ sqrt(distance)) vs equilibrium (eta ~ distance^p, p >= 1).

        eta^2 is smooth, so its zero at the wall is either simple -- the
        admissible window ends there, eta vanishes like delta^(1/2), and by
        the Abel identity h != 0: a fold -- or of even order, eta like
        delta^p with p >= 1 and h = 0: an equilibrium.  Classifying by
        h(u_wall) directly is unreliable: a touch wall is only located to
        ~1e-8 (the refinement bottoms out where eta^2 is roundoff noise),
        and h' = O(1) turns that into |h| ~ 1e-8 >> 0 at the estimate.  The
        vanishing order measured at two probe distances far outside the
        noise zone is immune to that uncertainty.
        """
        d1 = min(1e-3 * (1.0 + abs(u_wall)), 0.5 * (ell_wall - self._ell0))
        d2 = d1 / 64.0
        if d2 <= 0.0:
            return False
        s1 = _speed(self.eta, u_wall - self.d * d1)
        s2 = _speed(self.eta, u_wall - self.d * d2)
        if not s1 or not s2:
            return False
        p = math.log(s1 / s2) / math.log(d1 / d2)
        return p < 0.75

    # -- inversion

    def solve(self, target_tau: float, ell_guess: float) -> float:
        """Arc length with tau(ell) = target_tau (target within cap)."""
        if self.start_wall_h is not None and target_tau <= self._tau0:
            return 0.5 * target_tau * target_tau * self.start_wall_h
        if self.wall_kind == "turn" and self.wall_tau is not None:
            remaining = self.wall_tau - target_tau
            tail = self.wall_tau - self.cap_tau
            if remaining <= tail:
                # inside the analytic sqrt zone at the far wall
                return self.wall_ell - 0.5 * remaining * remaining * self.wall_h
        lo, hi = self._ell0, self.cap_ell
        tau_lo, tau_hi = self._tau0, self.cap_tau
        ell = min(max(ell_guess, lo), hi)
        for _ in range(80):
            t = self.tau(ell)
            if t < target_tau:
                lo, tau_lo = ell, t
            else:
                hi, tau_hi = ell, t
            err = target_tau - t
            if abs(err) <= _INVERT_TOL * (1.0 + abs(target_tau)):
                return ell
            u = self.u_from + self.d * ell
            s = _speed(self.eta, u)
            step = err * s if (s is not None and s > 0.0) else None
            nxt = ell + step if step is not None else None
            if nxt is None or not (lo < nxt < hi):
                nxt = 0.5 * (lo + hi)
            if abs(nxt - ell) <= 1e-16 * (1.0 + abs(ell)) and abs(err) <= 1e-9 * (1.0 + abs(target_tau)):
                return ell
            ell = nxt
        return ell

    def speed_at(self, ell: float) -> float:
        if ell <= 0.0 and self.start_wall_h is not None:
            return 0.0
        s = _speed(self.eta, self.u_from + self.d * ell)
        if s is None:
            # only reachable at an evaluation boundary; approach one-sided
            s = _speed(self.eta, self.u_from + self.d * ell * (1.0 - 1e-12)) or 0.0
        return s


def _initial_direction(eta, u0: float) -> tuple[float, float | None]:
    """(direction, arrival coefficient or None) at the starting point.

    Returns direction 0.0 when u0 is an equilibrium (constant solution).
    When u0 sits exactly on a fold wall the motion starts in the
    acceleration direction -sign(h) with the sqrt-tail arc start; the
    tail coefficient is measured from eta (see _arrival_coefficient).
    """
    v = _signed(eta, u0)
    if v is None:
        raise DomainError(f"eta is not evaluable at the initial point u0 = {u0!r}")
    if v != 0.0:
        return (1.0 if v > 0 else -1.0), None
    ode = getattr(eta, "ode", None)
    h0 = None
    if ode is not None:
        try:
            h0 = float(ode.h(u0))
        except (DomainError, ValueError, OverflowError, ZeroDivisionError):
            h0 = None
    if h0 is None or abs(h0) <= _EQUILIBRIUM_H * (1.0 + abs(h0)):
        return 0.0, None
    d = 1.0 if -h0 > 0 else -1.0
    coeff = _arrival_coefficient(eta, u0, -d, 1.0 + abs(u0))
    return d, (coeff if coeff > 0.0 else None)


def _march(eta, u0: float, targets, d0: float, start_wall_h: float | None,
           max_turnings: int):
    """Walk ascending time offsets >= 0 from u0; returns (samples, events).

    samples are (offset, u, u_velocity) in marcher time; events are
    (offset, kind).
    """
    samples: list = []
    events: list = []
    targets = list(targets)
    if not targets:
        return samples, events
    if d0 == 0.0:
        for t in targets:
            samples.append((t, u0, 0.0))
        return samples, events
    clock = 0.0
    arc = _Arc(eta, u0, d0, start_wall_h=start_wall_h)
    turns_left = max_turnings
    idx = 0
    guess = 0.0
    needed = targets[-1]
    arc.survey(needed - clock)
    while idx < len(targets):
        local = targets[idx] - clock
        arc_end = arc.wall_tau if arc.wall_kind is not None else None
        if arc_end is None or local <= arc_end:
            if arc.wall_kind is None and local > arc.cap_tau:
                if arc.cap_ell >= 1e8:
                    # finite-time blow-up: u left any resolvable window
                    events.append((clock + arc.cap_tau, "Truncated"))
                    return samples, events
                if arc.cap_slope is not None and arc.wall_ell is not None:
                    # exponential settling onto the equilibrium
                    a_rate = arc.cap_slope
                    delta = (arc.wall_ell - arc.cap_ell) * math.exp(
                        -a_rate * (local - arc.cap_tau))
                    u = arc.u_from + arc.d * (arc.wall_ell - delta)
                    spd = _speed(arc.eta, u) if delta >= 1e-6 * (1.0 + abs(u)) else None
                    if spd is None:
                        spd = a_rate * delta
                    samples.append((targets[idx], u, arc.d * spd))
                    idx += 1
                    continue
                # no usable slope: flatten onto the cap
                ell = arc.cap_ell
            else:
                ell = arc.solve(local, guess)
            guess = ell
            u = arc.u_from + arc.d * ell
            samples.append((targets[idx], u, arc.d * arc.speed_at(ell)))
            idx += 1
            continue
        # the wall interrupts before this target
        clock += arc_end
        u_wall = arc.u_from + arc.d * arc.wall_ell
        if arc.wall_kind == "edge":
            events.append((clock, "DomainEdge"))
            return samples, events
        if turns_left <= 0:
            events.append((clock, "Truncated"))
            return samples, events
        events.append((clock, "TurningPoint"))
        turns_left -= 1
        arc = _Arc(eta, u_wall, -arc.d, start_wall_h=arc.wall_h)
        guess = 0.0
        arc.survey(needed - clock)
    return samples, events


def invert(eta, u0: float, zeta0: float = 0.0,
           span: tuple[float, float] = (0.0, 0.0), step: float = 0.01,
           max_turnings: int = 8) -> SolutionCurve:
    """Sample the trajectory through (zeta0, u0) on a uniform zeta grid.

    Parameters
    ----------
    eta : EtaField (or any callable with optional .ode attached)
        The branch field; the initial velocity is eta(u0).
    u0, zeta0 : float
        Anchor point of the trajectory.
    span : (float, float)
        Closed zeta window to sample.  Equal endpoints yield an empty
        curve.
    step : float
        Grid spacing, positive.
    max_turnings : int
        Fold budget per time direction; exceeding it ends the curve with
        a Truncated event.

    Returns
    -------
    SolutionCurve
        Samples at zeta = lo, lo + step, ... (strictly increasing), with
        uPrime = +-eta(u); events mark folds and boundary arrivals.

    Notes
    -----
    All internal arithmetic runs in offsets zeta - zeta0, so shifting
    zeta0 and the span together translates the curve exactly whenever the
    shifted endpoints are exactly representable.
    """
    lo, hi = float(span[0]), float(span[1])
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"invalid span ({lo!r}, {hi!r})")
    if hi == lo:
        return SolutionCurve(samples=[], events=[], base_zeta=zeta0, base_u=u0)
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    base = lo - float(zeta0)
    offsets = [base + j * step for j in range(n)]
    fwd = [s for s in offsets if s >= 0.0]
    back = [-s for s in offsets if s < 0.0][::-1]  # ascending positive

    d0, wall_h0 = _initial_direction(eta, float(u0))
    f_samples, f_events = _march(eta, float(u0), fwd, d0, wall_h0, max_turnings)
    # an anchor exactly on a fold wall makes the trajectory mirror symmetric
    # about zeta0: the backward half retraces the forward direction (the
    # assembly below flips its velocities), it must not walk into the wall
    b_dir = d0 if wall_h0 is not None else -d0
    b_samples, b_events = _march(eta, float(u0), back, b_dir, wall_h0, max_turnings)

    samples = []
    for off, u, vel in b_samples[::-1]:
        samples.append((zeta0 - off, u, -vel))
    for off, u, vel in f_samples:
        samples.append((zeta0 + off, u, vel))
    events = [(zeta0 - off, kind) for off, kind in b_events]
    events += [(zeta0 + off, kind) for off, kind in f_events]
    if wall_h0 is not None and lo <= float(zeta0) <= hi:
        events.append((float(zeta0), "TurningPoint"))
    events.sort(key=lambda e: e[0])
    return SolutionCurve(samples=samples, events=events, base_zeta=float(zeta0), base_u=float(u0))


def quadrature_map(eta, u_from: float, u_to: float, zeta0: float = 0.0) -> float:
    """zeta at u_to for the monotone branch through (zeta0, u_from).

    Evaluates zeta0 + integral_{u_from}^{u_to} du / eta(u) by tanh-sinh
    quadrature (absolute target 1e-10); endpoint zeros of eta are fine
    (integrable fold singularities), interior zeros are not.

    Raises
    ------
    InteriorZero
        When eta vanishes or changes sign strictly between the endpoints.
    QuadratureFailure
        When the quadrature cannot reach the target.
    """
    a, b = float(u_from), float(u_to)
    if a == b:
        return float(zeta0)
    interior = np.linspace(a, b, 2049)[1:-1]
    vals = np.empty(interior.shape)
    sgn = 0.0
    for i, u in enumerate(interior):
        v = _signed(eta, float(u))
        if v is None or v == 0.0:
            raise InteriorZero(f"eta vanishes near u = {float(u)!r} inside the map interval")
        if sgn == 0.0:
            sgn = 1.0 if v > 0 else -1.0
        elif (v > 0) != (sgn > 0):
            raise InteriorZero(f"eta changes sign near u = {float(u)!r} inside the map interval")
        vals[i] = v
    # even-order interior zeros never change sign; catch them as vanishing
    # local minima of |eta|
    mags = np.abs(vals)
    scale = float(np.max(mags))
    idx = np.arange(1, len(interior) - 1)
    is_min = (mags[idx] <= mags[idx - 1]) & (mags[idx] <= mags[idx + 1])
    for i in idx[is_min & (mags[idx] < 0.2 * scale)]:
        u_lo, u_hi = sorted((float(interior[i - 1]), float(interior[i + 1])))
        u_min, s_min = _golden_min(lambda u: _speed(eta, u), u_lo, u_hi)
        if s_min is not None and s_min <= 1e-8 * (1.0 + scale):
            raise InteriorZero(f"eta vanishes near u = {u_min!r} inside the map interval")

    def integrand(u):
        return 1.0 / np.asarray(eta(u), dtype=float)

    value, _ = tanh_sinh(integrand, a, b, target=1e-10)
    return float(zeta0) + value


def rk4_reference(ode, u0: float, uprime0: float, zeta0: float = 0.0,
                  span: tuple[float, float] = (0.0, 0.0), step: float = 1e-3) -> SolutionCurve:
    """Classical fixed-step integration of u'' + g(u) u' + h(u) = 0.

    Integrates outward from (zeta0, u0, uprime0) in both directions with
    the given step, recording every grid point inside span.  Stops a
    direction early (Truncated event) if the right side stops being
    evaluable or the state leaves double precision.
    """
    lo, hi = float(span[0]), float(span[1])
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    if hi < lo:
        raise ValueError(f"invalid span ({lo!r}, {hi!r})")
    if hi == lo:
        return SolutionCurve(samples=[], events=[], base_zeta=zeta0, base_u=u0)

    def rhs(u, v):
        return v, -float(ode.g(u)) * v - float(ode.h(u))

    def walk(n_steps: int, hstep: float):
        out = [(0.0, float(u0), float(uprime0))]
        u, v = float(u0), float(uprime0)
        for j in range(1, n_steps + 1):
            try:
                k1u, k1v = rhs(u, v)
                k2u, k2v = rhs(u + 0.5 * hstep * k1u, v + 0.5 * hstep * k1v)
                k3u, k3v = rhs(u + 0.5 * hstep * k2u, v + 0.5 * hstep * k2v)
                k4u, k4v = rhs(u + hstep * k3u, v + hstep * k3v)
            except (DomainError, ValueError, OverflowError, ZeroDivisionError):
                return out, True
            u = u + hstep * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0
            v = v + hstep * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            if not (math.isfinite(u) and math.isfinite(v)):
                return out, True
            out.append((j * abs(hstep), u, v))
        return out, False

    n_fwd = max(0, int(math.floor((hi - zeta0) / step + 1e-9)))
    n_back = max(0, int(math.floor((zeta0 - lo) / step + 1e-9)))
    fwd, fwd_trunc = walk(n_fwd, step)
    back, back_trunc = walk(n_back, -step)

    samples = []
    events = []
    for off, u, v in back[:0:-1]:
        if zeta0 - off >= lo - 1e-12 * (1.0 + abs(lo)):
            samples.append((zeta0 - off, u, v))
    if back_trunc:
        events.append((zeta0 - back[-1][0], "Truncated"))
    for off, u, v in fwd:
        if zeta0 + off <= hi + 1e-12 * (1.0 + abs(hi)):
            if zeta0 + off >= lo - 1e-12 * (1.0 + abs(lo)):
                samples.append((zeta0 + off, u, v))
    if fwd_trunc:
        events.append((zeta0 + fwd[-1][0], "Truncated"))
    events.sort(key=lambda e: e[0])
    return SolutionCurve(samples=samples, events=events, base_zeta=float(zeta0), base_u=float(u0))
