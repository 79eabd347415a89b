"""Elliptic integral, amplitude and Jacobi function tests.

Reference values were computed with mpmath (ellipf / ellipfun at 50
digits) and frozen here; agreement is asserted to 1e-12 absolute, two
orders above the couple-of-ulp spread between implementations.
"""

import math

import numpy as np
import pytest

from abelforge.expr import DomainError
from abelforge.special import (
    carlson_rf,
    elliptic_f,
    elliptic_reach,
    gudermann,
    jacobi_am,
    jacobi_sn_cn_dn,
)


# ---------------------------------------------------------------------------
# incomplete integral F(phi | m)


@pytest.mark.parametrize("phi,m,ref", [
    (math.pi / 6, 2.0, 0.5840828416771516),
    (0.7, 2.0, 0.8975524799915575),
    (1.2, 0.5, 1.340733523660133),
    (4.0, 0.5, 4.619520616257108),
    (0.9, -3.0, 0.7228018221683382),
    (math.pi / 2, 0.5, 1.8540746773013719),   # complete integral K(1/2)
])
def test_elliptic_f_frozen_references(phi, m, ref):
    assert elliptic_f(phi, m) == pytest.approx(ref, abs=1e-12)


def test_elliptic_f_trivial_moduli():
    phis = np.linspace(-2.0, 2.0, 41)
    np.testing.assert_allclose(elliptic_f(phis, 0.0), phis, atol=1e-15)
    # F(phi | 1) = ln|sec phi + tan phi| = asinh(tan phi)
    phis = np.linspace(-1.4, 1.4, 29)
    ref = np.log(1.0 / np.cos(phis) + np.tan(phis))
    np.testing.assert_allclose(elliptic_f(phis, 1.0), ref, atol=1e-12)


def test_elliptic_f_odd_and_additive_in_quarter_periods():
    m = 0.7
    k = elliptic_f(math.pi / 2, m)
    phi = 0.6
    assert elliptic_f(-phi, m) == pytest.approx(-elliptic_f(phi, m), rel=1e-15)
    # F(phi + pi | m) = F(phi | m) + 2K(m)
    assert elliptic_f(phi + math.pi, m) == pytest.approx(
        elliptic_f(phi, m) + 2.0 * k, rel=1e-14)


def test_elliptic_f_domain_wall_closed():
    m = 2.0
    wall = math.asin(1.0 / math.sqrt(m))
    assert math.isfinite(elliptic_f(wall * (1.0 - 1e-12), m))
    with pytest.raises(DomainError):
        elliptic_f(wall, m)          # m sin^2 phi == 1 exactly
    with pytest.raises(DomainError):
        elliptic_f(0.8, m)           # beyond the wall
    with pytest.raises(DomainError):
        elliptic_f(math.pi / 2, 1.0)  # the m = 1 logarithm diverges


def test_carlson_symmetry_and_known_value():
    # RF(x, y, z) is symmetric; RF(0, 1, 1) = pi/2; RF(t,t,t) = 1/sqrt(t)
    assert carlson_rf(0.0, 1.0, 1.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert carlson_rf(2.0, 2.0, 2.0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    a = carlson_rf(0.1, 0.7, 1.9)
    for perm in [(0.7, 0.1, 1.9), (1.9, 0.7, 0.1), (0.7, 1.9, 0.1)]:
        assert carlson_rf(*perm) == pytest.approx(a, rel=1e-15)


# ---------------------------------------------------------------------------
# reach of the steep regime


def test_elliptic_reach_values():
    assert elliptic_reach(0.5) == math.inf
    assert elliptic_reach(1.0) == math.inf
    # K(1/2)/sqrt(2), frozen from the mpmath value of K(1/2)
    assert elliptic_reach(2.0) == pytest.approx(1.3110287771460598, abs=1e-12)
    # reach(m) = K(1/m)/sqrt(m) exactly, by the reciprocal-modulus identity
    for m in (1.5, 2.0, 5.0, 25.0):
        assert elliptic_reach(m) == pytest.approx(
            elliptic_f(math.pi / 2, 1.0 / m) / math.sqrt(m), rel=1e-14)


# ---------------------------------------------------------------------------
# amplitude function


@pytest.mark.parametrize("m", [0.0, 0.5, 8.0 / 9.0, 1.0, 2.0])
def test_am_inverts_f(m):
    if m > 1.0:
        wall = math.asin(1.0 / math.sqrt(m))
        phis = np.linspace(-0.999 * wall, 0.999 * wall, 81)
    else:
        phis = np.linspace(-1.5, 1.5, 81)
    zs = elliptic_f(phis, m)
    back = jacobi_am(zs, m)
    np.testing.assert_allclose(back, phis, atol=1e-12, rtol=0)


def test_am_beyond_one_period():
    # unbounded amplitude growth for m < 1: am(z + 2K) = am(z) + pi
    m = 0.6
    k = elliptic_f(math.pi / 2, m)
    z = 0.47
    assert jacobi_am(z + 2 * k, m) == pytest.approx(
        jacobi_am(z, m) + math.pi, rel=1e-14)


def test_am_near_wall_zeta_roundtrip():
    # Approaching the reach, the amplitude's ulp spacing caps absolute
    # accuracy near 1e-8; the zeta-space roundtrip stays much tighter.
    m = 2.0
    reach = elliptic_reach(m)
    for frac in (0.9, 0.999, 1.0 - 1e-9, 1.0 - 1e-12):
        z = reach * frac
        phi = jacobi_am(z, m)
        assert phi < math.asin(1.0 / math.sqrt(m))
        assert elliptic_f(phi, m) == pytest.approx(z, abs=2e-7)


def test_am_raises_at_and_past_reach():
    m = 2.0
    reach = elliptic_reach(m)
    with pytest.raises(DomainError):
        jacobi_am(reach, m)
    with pytest.raises(DomainError):
        jacobi_am(reach * 1.01, m)
    with pytest.raises(DomainError):
        jacobi_am(-reach, m)


def test_am_odd():
    zs = np.linspace(0.0, 1.2, 13)
    np.testing.assert_array_equal(jacobi_am(-zs, 2.0), -jacobi_am(zs, 2.0))
    np.testing.assert_array_equal(jacobi_am(-zs, 0.5), -jacobi_am(zs, 0.5))


# ---------------------------------------------------------------------------
# sn, cn, dn


@pytest.mark.parametrize("m", [0.0, 0.3, 0.5, 8.0 / 9.0, 1.0, 2.0])
def test_jacobi_identities(m):
    if m > 1.0:
        zs = np.linspace(-3.0, 3.0, 101)  # periodic continuation past reach
    else:
        zs = np.linspace(-6.0, 6.0, 101)
    sn, cn, dn = jacobi_sn_cn_dn(zs, m)
    np.testing.assert_allclose(sn * sn + cn * cn, 1.0, atol=1e-12)
    np.testing.assert_allclose(dn * dn + m * sn * sn, 1.0, atol=1e-12)


def test_jacobi_trivial_moduli():
    zs = np.linspace(-2.0, 2.0, 21)
    sn, cn, dn = jacobi_sn_cn_dn(zs, 0.0)
    np.testing.assert_allclose(sn, np.sin(zs), atol=1e-15)
    np.testing.assert_allclose(cn, np.cos(zs), atol=1e-15)
    np.testing.assert_allclose(dn, 1.0, atol=1e-15)
    sn, cn, dn = jacobi_sn_cn_dn(zs, 1.0)
    np.testing.assert_allclose(sn, np.tanh(zs), atol=1e-15)
    np.testing.assert_allclose(cn, 1.0 / np.cosh(zs), atol=1e-14)
    np.testing.assert_allclose(dn, 1.0 / np.cosh(zs), atol=1e-14)


def test_jacobi_periodicity():
    m = 0.5
    k = elliptic_f(math.pi / 2, m)
    zs = np.linspace(-1.0, 1.0, 11)
    sn0, cn0, dn0 = jacobi_sn_cn_dn(zs, m)
    sn4, cn4, dn4 = jacobi_sn_cn_dn(zs + 4 * k, m)
    np.testing.assert_allclose(sn4, sn0, atol=1e-12)
    np.testing.assert_allclose(cn4, cn0, atol=1e-12)
    np.testing.assert_allclose(dn4, dn0, atol=1e-12)


def test_jacobi_reciprocal_modulus_continuation():
    # For m > 1 the functions continue past the amplitude wall through
    # sn(z | m) = sn(z sqrt(m) | 1/m)/sqrt(m) and the cn/dn swap.
    m, z = 2.0, 1.7   # beyond reach(2) = 1.311...
    sn, cn, dn = jacobi_sn_cn_dn(z, m)
    rm = math.sqrt(m)
    sn_r, cn_r, dn_r = jacobi_sn_cn_dn(z * rm, 1.0 / m)
    assert sn == pytest.approx(sn_r / rm, rel=1e-13)
    assert cn == pytest.approx(dn_r, rel=1e-13)
    assert dn == pytest.approx(cn_r, rel=1e-13)


def test_jacobi_against_frozen_reference():
    # mpmath ellipfun at m = 0.5, z = 1.3
    sn, cn, dn = jacobi_sn_cn_dn(1.3, 0.5)
    assert sn == pytest.approx(0.9204464742100178, abs=1e-13)
    assert cn == pytest.approx(0.3908686328094734, abs=1e-13)
    assert dn == pytest.approx(0.7592029663121539, abs=1e-13)


# ---------------------------------------------------------------------------
# gudermannian


def test_gudermann_matches_am_at_m_one():
    zs = np.linspace(-4.0, 4.0, 17)
    np.testing.assert_allclose(gudermann(zs), jacobi_am(zs, 1.0),
                               atol=5e-16, rtol=0)


def test_gudermann_closed_form():
    for x in (-2.0, -0.3, 0.0, 1.7):
        assert gudermann(x) == pytest.approx(math.atan(math.sinh(x)), abs=1e-15)
