"""Unit-disc metric layer: formulas, inverses, invariance."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from imlab.disc_metrics import (
    DiscDomainError,
    HyperbolicValue,
    disc_automorphism,
    from_star,
    hyperbolic_distance,
    mobius_distance,
    to_star,
)


def disc_points(max_radius=0.95):
    return st.tuples(
        st.floats(-max_radius, max_radius),
        st.floats(-max_radius, max_radius),
    ).map(lambda t: complex(*t)).filter(lambda z: abs(z) < max_radius)


def test_mobius_center():
    assert mobius_distance(0, 0.3 + 0.4j) == pytest.approx(0.5, abs=1e-15)


def test_mobius_identity():
    assert mobius_distance(0.2 + 0.1j, 0.2 + 0.1j) == 0.0


def test_mobius_hand_value():
    # |(0.5 + 0.5) / (1 + 0.25)| computed by hand
    assert mobius_distance(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)


def test_hyperbolic_zero():
    assert hyperbolic_distance(0, 0).value == 0.0


def test_hyperbolic_against_density_quadrature():
    # independent oracle: integrate the hyperbolic density 1/(1-t^2) on [0, 0.5]
    oracle, err = quad(lambda t: 1.0 / (1.0 - t * t), 0.0, 0.5)
    assert err < 1e-12
    assert hyperbolic_distance(0, 0.5).value == pytest.approx(oracle, abs=1e-12)


def test_outside_disc_rejected():
    with pytest.raises(DiscDomainError):
        mobius_distance(1.2, 0)
    with pytest.raises(DiscDomainError):
        hyperbolic_distance(0, 1.0)
    with pytest.raises(DiscDomainError):
        from_star(1.0)


def test_star_round_trip_basics():
    assert to_star(HyperbolicValue.from_value(0.0)) == 0.0
    val = hyperbolic_distance(0, 0.5)
    assert to_star(val) == pytest.approx(0.5, abs=1e-15)


@given(st.floats(0.0, 20.0))
@settings(max_examples=200, deadline=None)
def test_star_inverse_pair(x):
    # the roundtrip condition number is ~sinh(x)cosh(x); beyond x ~ 18.7
    # tanh(x) rounds to 1.0 in float64 and the inverse saturates
    star = to_star(x)
    if star >= 1.0:
        assert x > 18.0
        return
    cond = 1.0 + math.sinh(x) * math.cosh(x)
    assert from_star(star).value == pytest.approx(x, abs=1e-12 * cond)


@given(disc_points(), disc_points())
@settings(max_examples=300, deadline=None)
def test_p_equals_artanh_m(a, b):
    p = hyperbolic_distance(a, b)
    assert p.star_value == pytest.approx(mobius_distance(a, b), abs=1e-12)
    assert p.value == pytest.approx(math.atanh(mobius_distance(a, b)), abs=1e-12)


@given(disc_points(0.9), disc_points(0.9), disc_points(0.9))
@settings(max_examples=200, deadline=None)
def test_triangle_inequalities(a, b, c):
    p_ab = hyperbolic_distance(a, b).value
    p_bc = hyperbolic_distance(b, c).value
    p_ac = hyperbolic_distance(a, c).value
    assert p_ac <= p_ab + p_bc + 1e-12
    m_ab, m_bc = mobius_distance(a, b), mobius_distance(b, c)
    m_ac = mobius_distance(a, c)
    assert m_ac <= (m_ab + m_bc) / (1.0 + m_ab * m_bc) + 1e-12


@given(disc_points(0.9), disc_points(0.9), disc_points(0.8),
       st.floats(0.0, 2.0 * math.pi))
@settings(max_examples=200, deadline=None)
def test_automorphism_invariance(a, b, center, theta):
    phi = disc_automorphism(center, theta)
    assert mobius_distance(phi(a), phi(b)) == pytest.approx(
        mobius_distance(a, b), abs=1e-11)
    assert hyperbolic_distance(phi(a), phi(b)).value == pytest.approx(
        hyperbolic_distance(a, b).value, abs=1e-9)


def test_infinity_sentinel():
    inf = HyperbolicValue.from_value(math.inf)
    assert inf.is_infinite and inf.star_value == 1.0
