import math

import mpmath as mp
import numpy as np
import pytest

from hybridisc import (
    InvalidGeometry,
    PoleAtInfinity,
    PoleInDisc,
    annulus_map,
    limit_points,
    nu_to_theta,
    theta_to_nu,
    to_annulus,
    to_physical,
)

# frozen from direct evaluation of the defining formulas at d=1, s=0.99
RHO_099 = 0.7527449039962066
A_099 = 0.1410673597966589
T_099 = 0.09040920094067698


def test_map_constants_tiny_disc_limit():
    m = annulus_map(1.0, 1e-8)
    assert m.rho < 1e-15
    assert abs(m.A - 1.0) < 1e-15


def test_map_constants_frozen_benchmark_geometry():
    m = annulus_map(1.0, 0.99)
    assert abs(m.rho - RHO_099) < 1e-14 * RHO_099
    assert abs(m.A - A_099) < 1e-14
    assert abs(m.T - T_099) < 1e-14
    assert abs(m.A - math.sqrt(1.0 - 0.99**2)) < 1e-13


def test_fig11_lower_geometry_separation():
    # d=1, s=0.999 is the 0.002-gap benchmark geometry
    m = annulus_map(1.0, 0.999)
    assert abs(2.0 * (m.d - m.s) - 0.002) < 1e-15


@pytest.mark.parametrize("d,s", [(1.0, 0.5), (1.0, 0.99), (2.5, 2.0), (1.0, 1 - 5e-8)])
def test_map_invariants(d, s):
    # oracle: the defining formula in 50-digit arithmetic (the double-precision
    # formula loses ~7 digits at separation 1e-7, the map builder must not)
    m = annulus_map(d, s)
    assert 0 < m.rho < 1
    assert m.T > 0
    with mp.workdps(50):
        q = mp.sqrt(1 - (mp.mpf(s) / mp.mpf(d)) ** 2)
        rho_direct = float((1 - q) / (1 + q))
        a_direct = float(mp.sqrt(mp.mpf(d) ** 2 - mp.mpf(s) ** 2))
    assert abs(m.rho - rho_direct) < 1e-14 * rho_direct
    assert abs(m.A - a_direct) < 1e-13 * m.A
    # recomputing 1 - rho from the stored (rounded) rho costs up to one ulp of
    # 1, so allow that on top of the relative band at extreme separations
    assert abs(m.A - d * (1 - m.rho) / (1 + m.rho)) < 1e-13 * m.A + 2e-16 * d


def test_map_rejects_bad_geometry():
    with pytest.raises(InvalidGeometry):
        annulus_map(1.0, 1.0)
    with pytest.raises(InvalidGeometry):
        annulus_map(1.0, -0.1)


def test_forward_map_special_points():
    m = annulus_map(1.0, 0.99)
    assert abs(to_physical(m, m.sqrt_rho + 0j)) < 1e-15
    with pytest.raises(PoleAtInfinity):
        to_physical(m, -m.sqrt_rho + 0j)
    # zeta = 1 lands on the circle around +d
    z = to_physical(m, 1.0 + 0j)
    assert abs(abs(z - m.d) - m.s) < 1e-13


def test_inverse_map_special_points():
    m = annulus_map(1.0, 0.99)
    assert abs(to_annulus(m, 0j) - m.sqrt_rho) < 1e-15
    assert abs(to_annulus(m, -m.A + 0j)) < 1e-15
    assert abs(abs(to_annulus(m, m.d + m.s + 0j)) - 1.0) < 1e-13
    with pytest.raises(PoleInDisc):
        to_annulus(m, m.A + 0j)


def test_round_trip_on_random_annulus_points():
    m = annulus_map(1.0, 0.99)
    rng = np.random.default_rng(11)
    r = rng.uniform(m.rho, 1.0, 1000)
    ang = rng.uniform(-math.pi, math.pi, 1000)
    zeta = r * np.exp(1j * ang)
    back = to_annulus(m, to_physical(m, zeta))
    assert np.max(np.abs(back - zeta)) < 1e-12


@pytest.mark.parametrize("s", [0.9, 0.99, 0.999])
def test_circles_map_onto_disc_boundaries(s):
    m = annulus_map(1.0, s)
    nu = 2 * math.pi * np.arange(1024) / 1024
    outer = to_physical(m, np.exp(1j * nu))
    inner = to_physical(m, m.rho * np.exp(1j * nu))
    assert np.max(np.abs(np.abs(outer - m.d) - m.s)) < 1e-12
    assert np.max(np.abs(np.abs(inner + m.d) - m.s)) < 1e-12


def test_map_scale_points_sit_inside_discs():
    m = annulus_map(1.0, 0.99)
    assert abs(m.A - m.d) < m.s       # +A inside the disc at +d
    assert abs(-m.A + m.d) < m.s      # -A inside the disc at -d


def test_reflection_limit_points_coincide_with_map_scale():
    m = annulus_map(1.0, 0.99)
    lo, hi = limit_points(-1.0 + 0j, 1.0 + 0j, 0.99)
    assert abs(lo - (-m.A)) < 1e-12
    assert abs(hi - m.A) < 1e-12
    # rotated/translated pair: limit points move with the geometry
    c1, c2 = 1 + 1j, 3 + 3j
    lo2, hi2 = limit_points(c1, c2, 1.0)
    mm = annulus_map(abs(c2 - c1) / 2, 1.0)
    rot = (c2 - c1) / abs(c2 - c1)
    mid = (c1 + c2) / 2
    assert abs(lo2 - (mid - rot * mm.A)) < 1e-12
    assert abs(hi2 - (mid + rot * mm.A)) < 1e-12


def test_angle_relation_endpoints_and_oddness():
    m = annulus_map(1.0, 0.99)
    assert theta_to_nu(m, 0.0) == 0.0
    assert abs(theta_to_nu(m, math.pi) - math.pi) < 1e-14
    th = np.linspace(-math.pi, math.pi, 41)
    nu = theta_to_nu(m, th)
    assert np.max(np.abs(nu + theta_to_nu(m, -th))) < 1e-15
    assert np.all(np.diff(nu) > 0)


def test_angle_relation_quarter_turn_value():
    m = annulus_map(1.0, 0.99)
    sr = m.sqrt_rho
    expected = 2.0 * math.atan((1 - sr) / (1 + sr))
    assert abs(theta_to_nu(m, math.pi / 2) - expected) < 1e-14
    # cross-check against the boundary parametrizations:
    # z = d + s e^{-i theta} on |z-d|=s corresponds to zeta = -e^{i nu}
    theta = math.pi / 2
    zeta = to_annulus(m, m.d + m.s * np.exp(-1j * theta))
    nu = float(np.angle(-zeta))
    assert abs(nu - theta_to_nu(m, theta)) < 1e-12


def test_angle_relation_round_trip():
    m = annulus_map(1.0, 0.999)
    th = np.linspace(-math.pi, math.pi, 257)
    assert np.max(np.abs(nu_to_theta(m, theta_to_nu(m, th)) - th)) < 1e-12
