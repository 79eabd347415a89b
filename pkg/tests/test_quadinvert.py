"""Trajectory reconstruction: marching, events, maps, reference integrator."""

import math

import numpy as np
import pytest

from abelforge.abelcore import eta_from_h
from abelforge.catalog import build
from abelforge.expr import DomainError, ScalarField
from abelforge.quadinvert import (
    InteriorZero,
    invert,
    quadrature_map,
    rk4_reference,
)

SQRT2 = math.sqrt(2.0)


# -- grid and assembly structure


def test_zero_length_span_is_empty():
    fis = build("fisher", {"c2": 0.5})
    curve = invert(fis.eta, 0.0, zeta0=0.0, span=(1.0, 1.0), step=0.1)
    assert curve.samples == []
    assert curve.events == []
    z, u, v = curve.arrays()
    assert z.shape == u.shape == v.shape == (0,)


def test_grid_is_uniform_and_strictly_increasing():
    fis = build("fisher", {"c2": 0.5})
    curve = invert(fis.eta, 0.2, zeta0=0.5, span=(-0.75, 1.5), step=0.125)
    z, _, _ = curve.arrays()
    assert np.all(np.diff(z) > 0)
    np.testing.assert_allclose(z, -0.75 + 0.125 * np.arange(19), rtol=0, atol=1e-12)


def test_shift_covariance_is_exact():
    # internal arithmetic runs in offsets, so a representable translation of
    # (zeta0, span) must reproduce u and uPrime bit for bit
    pen = build("pendulum", {"m": 2.0})
    a = invert(pen.eta, 0.3, zeta0=0.0, span=(-1.0, 1.0), step=0.125)
    b = invert(pen.eta, 0.3, zeta0=8.0, span=(7.0, 9.0), step=0.125)
    za, ua, va = a.arrays()
    zb, ub, vb = b.arrays()
    assert np.all(zb - 8.0 == za)
    assert np.all(ua == ub)
    assert np.all(va == vb)


def test_uprime_is_signed_eta_of_u():
    pen = build("pendulum", {"m": 2.0})
    curve = invert(pen.eta, 0.3, zeta0=0.0, span=(-1.0, 1.0), step=0.05)
    _, u, v = curve.arrays()
    np.testing.assert_allclose(np.abs(v), pen.eta(u), rtol=0, atol=1e-12)
    # rising branch through u0 = 0.3: positive velocity everywhere on the arc
    assert np.all(v > 0)


def test_invert_rejects_bad_step_and_span():
    fis = build("fisher", {"c2": 0.5})
    with pytest.raises(ValueError):
        invert(fis.eta, 0.2, span=(0.0, 1.0), step=0.0)
    with pytest.raises(ValueError):
        invert(fis.eta, 0.2, span=(1.0, 0.0), step=0.1)
    with pytest.raises(ValueError):
        invert(fis.eta, 0.2, span=(0.0, math.inf), step=0.1)


def test_invert_rejects_unevaluable_anchor():
    # the radicand is negative below the wall, eta(u0) has no value there
    fis = build("fisher", {"c2": 0.5})
    with pytest.raises(DomainError):
        invert(fis.eta, -10.0, span=(0.0, 1.0), step=0.1)


def test_equilibrium_anchor_yields_constant_curve():
    # u = 1 is a fixed point of the front: eta(1) = 0 and h(1) = 0
    bh = build("burgers-huxley", {"mu": 1.0, "c0": 1.0})
    assert float(bh.ode.h(1.0)) == 0.0
    curve = invert(bh.eta, 1.0, zeta0=0.0, span=(-2.0, 2.0), step=0.5)
    _, u, v = curve.arrays()
    assert np.all(u == 1.0)
    assert np.all(v == 0.0)
    assert curve.events == []


# -- closed-form profiles


def test_fisher_soliton_profile():
    fis = build("fisher", {"c2": 0.5})
    curve = invert(fis.eta, fis.closed_form(1.0), zeta0=1.0,
                   span=(0.05, 9.0), step=0.05)
    z, u, _ = curve.arrays()
    assert curve.events == []
    np.testing.assert_allclose(u, fis.closed_form(z), rtol=0, atol=5e-7)
    # interior accuracy is far better than the blanket tolerance; the last
    # stretch rides the equilibrium settling model, good to a few 1e-9
    inner = (z > 0.5) & (z < 6.0)
    assert np.max(np.abs(u[inner] - fis.closed_form(z[inner]))) < 1e-9


def test_fisher_second_difference_solves_the_oscillator():
    # discrete check straight against u'' + g(u) u' + h(u) = 0, O(step^2)
    fis = build("fisher", {"c2": 0.5})
    step = 0.05
    curve = invert(fis.eta, fis.closed_form(1.0), zeta0=1.0,
                   span=(0.1, 8.0), step=step)
    _, u, _ = curve.arrays()
    du = (u[2:] - u[:-2]) / (2.0 * step)
    ddu = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / step**2
    res = ddu + fis.ode.g(u[1:-1]) * du + fis.ode.h(u[1:-1])
    assert np.max(np.abs(res)) < 2e-3


def test_pendulum_profile_and_rk4_agree_with_closed_form():
    pen = build("pendulum", {"m": 2.0})
    curve = invert(pen.eta, pen.closed_form(0.0), zeta0=0.0,
                   span=(-1.2, 1.2), step=0.01)
    z, u, _ = curve.arrays()
    np.testing.assert_allclose(u, pen.closed_form(z), rtol=0, atol=1e-11)
    rk = rk4_reference(pen.ode, pen.closed_form(0.0), pen.closed_form_d(0.0),
                       zeta0=0.0, span=(-1.2, 1.2), step=1e-3)
    zr, ur, _ = rk.arrays()
    assert rk.events == []
    np.testing.assert_allclose(ur, pen.closed_form(zr), rtol=0, atol=1e-11)


def test_oscillation_profile_between_walls():
    osc = build("fisher", {"c2": 0.25})
    curve = invert(osc.eta, osc.closed_form(1.0), zeta0=1.0,
                   span=(0.1, 2.3), step=0.01)
    z, u, _ = curve.arrays()
    assert curve.events == []
    np.testing.assert_allclose(u, osc.closed_form(z), rtol=0, atol=1e-6)


# -- folds


def test_fold_turning_point_near_lower_wall():
    # anchored 1e-9 above the wall; the sqrt tail gives the arrival time
    # -sqrt(2 delta / A) with A = |2 h(wall)| = 1.5 for this ratio companion
    fis = build("fisher", {"c2": 0.5})
    curve = invert(fis.eta, -0.5 + 1e-9, zeta0=0.0,
                   span=(-0.001, 0.001), step=1e-5)
    tps = [z for z, kind in curve.events if kind == "TurningPoint"]
    assert len(tps) == 1
    assert abs(tps[0] - -3.65148368108701e-05) < 1e-12  # frozen
    assert abs(tps[0] + math.sqrt(2.0e-9 / 1.5)) < 5e-12
    # the curve dips to the wall and comes back: interior minimum near -0.5
    _, u, _ = curve.arrays()
    assert u.min() >= -0.5
    assert u.min() < -0.5 + 1e-9
    assert u[0] > u.min() < u[-1]


def test_oscillation_turning_point_matches_wall_arrival():
    # anchored 1e-12 above the lower wall r1; the opposite wall sits half a
    # period away at 2.4400995008696142, minus the sqrt tail of the 1e-12
    # start offset
    osc = build("fisher", {"c2": 0.25})
    r1 = (1.0 - math.sqrt(3.0)) / 2.0
    curve = invert(osc.eta, r1 + 1e-12, zeta0=0.0, span=(0.0, 3.0), step=0.01)
    tps = [z for z, kind in curve.events if kind == "TurningPoint"]
    assert len(tps) == 1
    assert abs(tps[0] - 2.4400980866411532) < 1e-12  # frozen
    assert abs(tps[0] - (2.4400995008696142 - math.sqrt(2.0e-12))) < 1e-9


def test_turning_budget_truncates_periodic_motion():
    osc = build("fisher", {"c2": 0.25})
    r1 = (1.0 - math.sqrt(3.0)) / 2.0
    curve = invert(osc.eta, r1 + 1e-12, zeta0=0.0, span=(0.0, 30.0),
                   step=0.05, max_turnings=3)
    kinds = [kind for _, kind in curve.events]
    assert kinds == ["TurningPoint"] * 3 + ["Truncated"]
    times = [z for z, _ in curve.events]
    # wall-to-wall flights all take half a period
    half = 2.4400995008696142
    gaps = np.diff(times)
    np.testing.assert_allclose(gaps, half, rtol=0, atol=1e-8)
    # no samples beyond the truncation time
    z, _, _ = curve.arrays()
    assert z[-1] <= times[-1]


def test_anchor_exactly_on_fold_wall_mirrors():
    # eta = sqrt(1/2 - 2 u^2) vanishes exactly at u = 1/2 with h(1/2) != 0;
    # the trajectory through that anchor is u = cos(sqrt(2) zeta) / 2, even
    # about the anchor, with folds every pi / sqrt(2)
    ef = eta_from_h(ScalarField("u"), k=-2.0, c1=0.5)
    assert float(ef(0.5)) == 0.0
    curve = invert(ef, 0.5, zeta0=0.0, span=(-3.0, 3.0), step=0.01)
    z, u, v = curve.arrays()
    np.testing.assert_allclose(u, 0.5 * np.cos(SQRT2 * z), rtol=0, atol=1e-11)
    np.testing.assert_allclose(v, -0.5 * SQRT2 * np.sin(SQRT2 * z),
                               rtol=0, atol=1e-10)
    tps = [z for z, kind in curve.events if kind == "TurningPoint"]
    period = math.pi / SQRT2
    np.testing.assert_allclose(tps, [-period, 0.0, period], rtol=0, atol=1e-9)


def test_anchor_fold_outside_window_is_not_reported():
    ef = eta_from_h(ScalarField("u"), k=-2.0, c1=0.5)
    curve = invert(ef, 0.5, zeta0=0.0, span=(0.5, 1.5), step=0.1)
    assert all(kind != "TurningPoint" or z >= 0.5 for z, kind in curve.events)
    assert (0.0, "TurningPoint") not in curve.events


# -- fronts, poles, and finite-time escape


def test_front_settles_onto_equilibria():
    bh = build("burgers-huxley", {"mu": 1.0, "c0": 1.0})
    curve = invert(bh.eta, 0.0, zeta0=0.0, span=(-12.0, 12.0), step=0.1)
    z, u, _ = curve.arrays()
    assert curve.events == []
    np.testing.assert_allclose(u, np.tanh(z), rtol=0, atol=5e-9)


def test_pole_branch_tracks_reciprocal():
    bh = build("burgers-huxley", {"mu": 1.0, "c0": 0.0})
    curve = invert(bh.eta, 1.0, zeta0=1.0, span=(0.2, 5.0), step=0.05)
    z, u, v = curve.arrays()
    assert curve.events == []
    np.testing.assert_allclose(u, 1.0 / z, rtol=0, atol=1e-9)
    np.testing.assert_allclose(v, -1.0 / z**2, rtol=0, atol=1e-8)


def test_blowup_samples_and_truncation():
    # u' = 1 + u^2 from u0 = 0 escapes at +-pi/2; samples inside the window
    # must still follow tan even when the span reaches past the escape time
    bh = build("burgers-huxley", {"mu": -1.0, "c0": 1.0})
    curve = invert(bh.eta, 0.0, zeta0=0.0, span=(-2.0, 2.0), step=0.05)
    z, u, _ = curve.arrays()
    assert len(z) > 0
    assert np.max(np.abs(z)) < math.pi / 2.0
    np.testing.assert_allclose(u, np.tan(z), rtol=0, atol=1e-9)
    events = sorted(curve.events)
    assert [kind for _, kind in events] == ["Truncated", "Truncated"]
    for t, _ in events:
        assert abs(abs(t) - 1.570796319344316) < 1e-12  # frozen
        assert abs(t) < math.pi / 2.0


def test_blowup_one_sided_spans():
    bh = build("burgers-huxley", {"mu": -1.0, "c0": 1.0})
    fwd = invert(bh.eta, 0.0, zeta0=0.0, span=(0.0, 2.0), step=0.05)
    z, u, _ = fwd.arrays()
    np.testing.assert_allclose(u, np.tan(z), rtol=0, atol=1e-9)
    assert [kind for _, kind in fwd.events] == ["Truncated"]
    back = invert(bh.eta, 0.0, zeta0=0.0, span=(-2.0, 0.0), step=0.05)
    z, u, _ = back.arrays()
    np.testing.assert_allclose(u, np.tan(z), rtol=0, atol=1e-9)
    assert [kind for _, kind in back.events] == ["Truncated"]
    assert back.events[0][0] < 0


# -- quadrature_map


def test_quadrature_map_matches_arctangent():
    bh = build("burgers-huxley", {"mu": -1.0, "c0": 1.0})
    assert abs(quadrature_map(bh.eta, 0.0, 2.0) - math.atan(2.0)) < 1e-10
    assert abs(quadrature_map(bh.eta, 0.0, -1.0) + math.atan(1.0)) < 1e-10
    assert quadrature_map(bh.eta, 0.3, 0.3, zeta0=4.0) == 4.0


def test_quadrature_map_offsets_by_zeta0():
    bh = build("burgers-huxley", {"mu": -1.0, "c0": 1.0})
    plain = quadrature_map(bh.eta, 0.0, 1.5)
    shifted = quadrature_map(bh.eta, 0.0, 1.5, zeta0=2.5)
    assert abs(shifted - plain - 2.5) < 1e-12


def test_quadrature_map_through_fold_endpoint():
    # endpoint zeros of eta are integrable; wall-to-wall flight time of the
    # oscillation family is the frozen half period
    osc = build("fisher", {"c2": 0.25})
    r1 = (1.0 - math.sqrt(3.0)) / 2.0
    half = quadrature_map(osc.eta, r1, r1 + math.sqrt(3.0) / 2.0)
    assert abs(half - 2.4400995008696142) < 1e-8


def test_quadrature_map_rejects_interior_zero():
    bh = build("burgers-huxley", {"mu": 1.0, "c0": 1.0})
    with pytest.raises(InteriorZero):
        quadrature_map(bh.eta, 0.5, 1.5)  # eta = 1 - u^2 vanishes at u = 1


# -- rk4 reference


def test_rk4_rejects_bad_step_and_span():
    fis = build("fisher", {"c2": 0.5})
    with pytest.raises(ValueError):
        rk4_reference(fis.ode, 0.2, 0.1, span=(0.0, 1.0), step=-1e-3)
    with pytest.raises(ValueError):
        rk4_reference(fis.ode, 0.2, 0.1, span=(1.0, 0.0), step=1e-3)


def test_rk4_continues_through_the_fold():
    # the oscillator solution has a regular minimum at the wall even though
    # the monotone closed form stops there; rk4 must ride through it
    fis = build("fisher", {"c2": 0.5})
    rk = rk4_reference(fis.ode, fis.closed_form(1.0), fis.closed_form_d(1.0),
                       zeta0=1.0, span=(-1.0, 2.0), step=1e-3)
    z, u, _ = rk.arrays()
    assert rk.events == []
    assert z[0] == -1.0
    assert u.min() >= -0.5 - 1e-9
    # after bouncing at zeta ~ 0 the backward branch rises again
    assert u[0] > 0.5


def test_rk4_truncates_on_finite_time_escape():
    bh = build("burgers-huxley", {"mu": -1.0, "c0": 1.0})
    rk = rk4_reference(bh.ode, 0.0, 1.0, zeta0=0.0, span=(-2.0, 2.0), step=1e-3)
    z, u, _ = rk.arrays()
    kinds = [kind for _, kind in sorted(rk.events)]
    assert kinds == ["Truncated", "Truncated"]
    for t, _ in rk.events:
        assert math.pi / 2.0 - 1e-2 < abs(t) < math.pi / 2.0 + 1e-2
    inside = np.abs(z) <= 1.5
    np.testing.assert_allclose(u[inside], np.tan(z[inside]), rtol=0, atol=1e-6)


def test_rk4_matches_invert_on_shared_grid():
    # the two reconstructions are independent (quadrature inversion versus
    # direct integration); they must agree on a monotone arc
    pen = build("pendulum", {"m": 2.0})
    span, step = (-1.0, 1.0), 0.05
    curve = invert(pen.eta, pen.closed_form(0.0), zeta0=0.0, span=span, step=step)
    rk = rk4_reference(pen.ode, pen.closed_form(0.0), pen.closed_form_d(0.0),
                       zeta0=0.0, span=span, step=1e-3)
    zc, uc, _ = curve.arrays()
    zr, ur, _ = rk.arrays()
    on_grid = {round(z, 9): u for z, u in zip(zr, ur)}
    matched = 0
    for z, u in zip(zc, uc):
        key = round(z, 9)
        if key in on_grid:
            assert abs(u - on_grid[key]) < 1e-9
            matched += 1
    assert matched == len(zc)
