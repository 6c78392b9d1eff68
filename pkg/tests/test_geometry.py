import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from passalign.errors import (
    BadContactCount,
    DegenerateSPlane,
    OutOfValidRange,
    WrongSide,
    ZeroForce,
    ZeroNormalForce,
)
from passalign.geometry import (
    EEGeometry,
    ForceDecomposition,
    build_s_plane,
    contact_ratio,
    d_cc,
    decompose_force,
    l_o_bounds,
    mu_lim,
    theta_max_bound,
)

N_UP = np.array([0.0, 0.0, 1.0])
DEG = math.pi / 180.0


def plane_x():
    return build_s_plane(N_UP, (0.0525, 0.0, 0.0))


class TestSPlane:
    def test_normal_is_n_cross_lever(self):
        plane = plane_x()
        np.testing.assert_allclose(plane.normal_s, [0.0, 1.0, 0.0], atol=1e-15)
        e_t, n = plane.in_plane_basis
        np.testing.assert_allclose(n, N_UP)
        np.testing.assert_allclose(np.cross(e_t, n), plane.normal_s, atol=1e-15)

    @pytest.mark.parametrize("lever", [(0.0, 0.0, 0.0), (0.0, 0.0, 0.01), (1e-8, 0.0, 0.0)])
    def test_degenerate(self, lever):
        with pytest.raises(DegenerateSPlane):
            build_s_plane(N_UP, lever)


class TestDecomposition:
    def test_pure_push_lies_in_plane(self):
        dec = decompose_force((0.0, 0.0, -10.0), plane_x(), N_UP)
        np.testing.assert_allclose(dec.f_plane, [0.0, 0.0, -10.0])
        np.testing.assert_allclose(dec.f_out, 0.0, atol=1e-15)
        assert dec.theta == 0.0 and dec.beta == 0.0

    def test_recovers_in_plane_tilt(self):
        b = 6 * DEG
        f = 20.0 * (math.sin(b) * np.array([1.0, 0.0, 0.0]) - math.cos(b) * N_UP)
        dec = decompose_force(f, plane_x(), N_UP)
        assert dec.theta == pytest.approx(0.0, abs=1e-15)
        assert abs(dec.beta) == pytest.approx(0.10472, abs=1e-5)

    def test_out_of_plane_split(self):
        b, th = 6 * DEG, 10 * DEG
        in_plane = math.sin(b) * np.array([1.0, 0.0, 0.0]) - math.cos(b) * N_UP
        f = 20.0 * (math.cos(th) * in_plane + math.sin(th) * np.array([0.0, 1.0, 0.0]))
        dec = decompose_force(f, plane_x(), N_UP)
        assert np.linalg.norm(dec.f_plane) == pytest.approx(19.696, abs=5e-4)
        assert np.linalg.norm(dec.f_out) == pytest.approx(3.473, abs=5e-4)
        assert dec.theta == pytest.approx(th)
        assert abs(dec.beta) == pytest.approx(b)

    def test_sign_follows_rotation_about_n_s(self):
        plane = plane_x()
        # tilt toward -x: a positive rotation of -n about +y
        dec = decompose_force((-1.0, 0.0, -10.0), plane, N_UP)
        assert dec.beta > 0.0
        assert decompose_force((1.0, 0.0, -10.0), plane, N_UP).beta < 0.0

    def test_errors(self):
        with pytest.raises(ZeroForce):
            decompose_force((0.0, 0.0, 0.0), plane_x(), N_UP)
        with pytest.raises(WrongSide):
            decompose_force((0.0, 0.0, 5.0), plane_x(), N_UP)


class TestDcc:
    def test_values(self):
        assert d_cc(0.0525, 0.0) == 0.0
        assert d_cc(0.0, 0.3) == 0.0
        assert d_cc(0.0525, 6 * DEG) == pytest.approx(0.005488, abs=5e-7)
        assert d_cc(0.0525, -6 * DEG) == d_cc(0.0525, 6 * DEG)

    def test_negative_lever(self):
        with pytest.raises(ValueError):
            d_cc(-0.01, 0.1)


@pytest.mark.parametrize("i, expected", [(1, (0.0525, 0.0525)), (2, (0.02625, 0.0525)), (3, (0.0, 0.0525))])
def test_l_o_bounds(i, expected):
    assert l_o_bounds(i, 0.0525) == pytest.approx(expected)


@pytest.mark.parametrize("i", [0, 4, -1])
def test_l_o_bounds_bad_count(i):
    with pytest.raises(BadContactCount):
        l_o_bounds(i, 0.0525)


class TestThetaMax:
    def test_values(self):
        assert theta_max_bound(0.0) == 0.0
        # asin(0.181049) by hand; a quoted 10.434 deg is within rounding slack
        assert math.degrees(theta_max_bound(6 * DEG)) == pytest.approx(10.4308, abs=1e-4)
        assert math.degrees(theta_max_bound(6 * DEG)) == pytest.approx(10.434, abs=5e-3)
        assert math.degrees(theta_max_bound(34 * DEG)) == pytest.approx(75.592, abs=1e-3)

    def test_out_of_range(self):
        with pytest.raises(OutOfValidRange):
            theta_max_bound(36 * DEG)


class TestContactRatio:
    def _dec(self, fp, beta, fs):
        return ForceDecomposition(np.array([0.0, 0.0, -fp]), np.array([0.0, fs, 0.0]), 0.0, beta)

    def test_normal_push(self):
        r = contact_ratio(self._dec(20.0, 0.0, 0.0))
        assert (r.f_n, r.f_t, r.mu) == (20.0, 0.0, 0.0)

    def test_in_plane_tilt(self):
        r = contact_ratio(self._dec(20.0, 6 * DEG, 0.0))
        assert r.f_n == pytest.approx(19.890, abs=5e-4)
        assert r.f_t == pytest.approx(2.0906, abs=5e-5)
        assert r.mu == pytest.approx(math.tan(6 * DEG))

    def test_with_out_of_plane(self):
        r = contact_ratio(self._dec(19.696, 6 * DEG, 3.472))
        assert r.f_n == pytest.approx(19.588, abs=5e-4)
        assert r.f_t == pytest.approx(4.0366, abs=5e-4)
        assert r.mu == pytest.approx(0.20608, abs=5e-5)

    def test_zero_normal(self):
        with pytest.raises(ZeroNormalForce):
            contact_ratio(self._dec(0.0, 0.0, 1.0))


class TestMuLim:
    def test_anchors(self):
        assert mu_lim(0.0) == 0.0
        assert mu_lim(6 * DEG) == pytest.approx(0.2129, abs=5e-4)
        assert mu_lim(11 * DEG) == pytest.approx(0.4063, abs=5e-4)
        # values a practitioner rounds to one decimal
        assert round(mu_lim(6 * DEG), 1) == 0.2
        assert round(mu_lim(11 * DEG), 1) == 0.4

    def test_even(self):
        assert mu_lim(-0.1) == mu_lim(0.1)

    @given(st.floats(0.0, 0.6), st.floats(0.0, 0.6))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert mu_lim(lo) <= mu_lim(hi)

    def test_singular(self):
        with pytest.raises(OutOfValidRange):
            mu_lim(36 * DEG)


class TestEEGeometry:
    def test_feet_on_circle(self):
        g = EEGeometry()
        np.testing.assert_allclose(
            g.feet_body,
            [[0.0525, 0.0, 0.1], [-0.02625, 0.045466, 0.1], [-0.02625, -0.045466, 0.1]],
            atol=1e-6,
        )
        np.testing.assert_allclose(g.feet_body.mean(axis=0), g.cc_body, atol=1e-15)


@settings(max_examples=200)
@given(
    st.floats(-0.5, 0.5),
    st.floats(-1.0, 1.0),
    st.floats(0.5, 50.0),
    st.floats(0.0, 2 * math.pi),
)
def test_decomposition_reconstructs(beta, theta, mag, yaw):
    lever = np.array([math.cos(yaw), math.sin(yaw), 0.0]) * 0.05
    plane = build_s_plane(N_UP, lever)
    e_t, _ = plane.in_plane_basis
    in_plane = math.sin(beta) * e_t - math.cos(beta) * N_UP
    f = mag * (math.cos(theta) * in_plane + math.sin(theta) * plane.normal_s)
    dec = decompose_force(f, plane, N_UP)
    np.testing.assert_allclose(dec.f_plane + dec.f_out, f, atol=1e-12)
    assert abs(dec.f_out @ dec.f_plane) < 1e-9
    assert dec.theta == pytest.approx(abs(theta), abs=1e-9)
