import math

import numpy as np
import pytest

from passalign.controller import (
    FREE_FLIGHT,
    INTERACTION,
    ControllerConfig,
    EstimatorState,
    Reference,
    estimate_wrench,
    force_wrench,
    hybrid_wrench,
    motion_wrench,
)
from passalign.dynamics import BodyState, InertiaModel, coriolis_term, gravity_wrench

ZERO6 = np.zeros(6)
UPRIGHT = np.array([1.0, 0.0, 0.0, 0.0])


def at_origin():
    return Reference(np.zeros(3), UPRIGHT)


class TestMotion:
    def test_zero_error(self):
        w = motion_wrench(BodyState.at_rest(), at_origin(), InertiaModel(), ControllerConfig())
        np.testing.assert_array_equal(w, ZERO6)

    def test_position_error(self):
        cfg = ControllerConfig(K_p=10.0 * np.ones(6))
        w = motion_wrench(BodyState.at_rest((0.1, 0.0, 0.0)), at_origin(), InertiaModel(), cfg)
        np.testing.assert_allclose(w, [-1.0, 0, 0, 0, 0, 0])

    def test_feedforward(self):
        ref = Reference(np.zeros(3), UPRIGHT, accel=np.array([1.0, 0, 0, 0, 0, 0]))
        w = motion_wrench(BodyState.at_rest(), ref, InertiaModel(3.0), ControllerConfig())
        np.testing.assert_allclose(w, [3.0, 0, 0, 0, 0, 0])

    def test_attitude_error_restores(self):
        from passalign.rotations import quat_from_axis_angle

        s = BodyState.at_rest(orientation=quat_from_axis_angle((1, 0, 0), 0.1))
        w = motion_wrench(s, at_origin(), InertiaModel(), ControllerConfig())
        assert w[3] < 0.0 and abs(w[4]) < 1e-15


class TestForce:
    def test_zero_error(self):
        w, integral = force_wrench(20.0, 0.0, ControllerConfig(), 1e-3)
        assert w[2] == 20.0 and integral == 0.0

    def test_substitution(self):
        cfg = ControllerConfig(k_p=0.5, k_i=0.1)
        # integral' = -4 after the update: -4 = I0 + (-2) * 1e-3
        w, integral = force_wrench(18.0, -4.0 + 2e-3, cfg, 1e-3, f_ref=20.0)
        assert integral == pytest.approx(-4.0)
        assert w[2] == pytest.approx(21.4)

    def test_hand_off(self):
        w, _ = force_wrench(0.0, 0.0, ControllerConfig(), 1e-3, f_ref=0.0)
        np.testing.assert_array_equal(w, ZERO6)

    def test_anti_windup(self):
        cfg = ControllerConfig(integral_limit=1.0)
        integral = 0.0
        for _ in range(1000):
            _, integral = force_wrench(0.0, integral, cfg, 1e-2)
        assert integral == -1.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ControllerConfig(lam=np.array([1, 0, 1, 0, 1, 0]))
        with pytest.raises(ValueError):
            ControllerConfig(K_p=-np.ones(6))
        with pytest.raises(ValueError):
            ControllerConfig(k_i=0.0)


class TestHybrid:
    def test_selection(self):
        np.testing.assert_array_equal(hybrid_wrench(np.ones(6), ZERO6, ZERO6, ZERO6, INTERACTION), INTERACTION)
        np.testing.assert_array_equal(hybrid_wrench(np.ones(6), ZERO6, ZERO6, ZERO6, FREE_FLIGHT), np.ones(6))
        np.testing.assert_array_equal(hybrid_wrench(ZERO6, ZERO6, ZERO6, ZERO6, INTERACTION), ZERO6)

    def test_sum(self):
        w_f = np.array([0, 0, 20.0, 0, 0, 0])
        g = np.array([0, 0, -29.43, 0, 0, 0])
        np.testing.assert_allclose(hybrid_wrench(ZERO6, w_f, ZERO6, g, INTERACTION), [0, 0, -9.43, 0, 0, 0])

    def test_mode_switch(self):
        cfg = ControllerConfig()
        np.testing.assert_array_equal(cfg.with_mode(False).lam, FREE_FLIGHT)
        np.testing.assert_array_equal(cfg.with_mode(True).lam, INTERACTION)


def run_observer(true_w_e, seconds, dt=1e-3, K_0=10.0):
    """Frozen dynamics: the body does not move, so the model sees w_a + w_e = C v + g."""
    m = InertiaModel()
    twist = ZERO6
    est = EstimatorState.start(m, twist, K_0)
    g = -gravity_wrench(UPRIGHT, m.mass)
    C = coriolis_term(m, twist)
    w_a = C + g - true_w_e  # whatever the actuators did, the net wrench was zero
    out = []
    for _ in range(int(round(seconds / dt))):
        est, _ = estimate_wrench(est, twist, w_a, m, g, C, dt)
        out.append(est.wrench.copy())
    return np.array(out)


class TestEstimator:
    def test_zero_wrench(self):
        np.testing.assert_allclose(run_observer(ZERO6, 0.5), 0.0, atol=1e-12)

    def test_first_order_step(self):
        w = np.array([0, 0, 10.0, 0, 0, 0])
        est = run_observer(w, 0.3)
        t = np.arange(1, len(est) + 1) * 1e-3
        np.testing.assert_allclose(est[:, 2], 10.0 * (1.0 - np.exp(-10.0 * t)), atol=1e-9)
        assert est[-1, 2] == pytest.approx(9.502, abs=0.01)

    def test_converges_within_five_time_constants(self):
        w = np.array([1.0, -2.0, 3.0, 0.1, -0.2, 0.3])
        est = run_observer(w, 0.5)
        assert np.max(np.abs(est[-1] - w) / np.abs(w)) < 0.01

    def test_error_decays_monotonically(self):
        w = np.array([4.0, 0.5, -7.0, 0.2, 0.0, -0.1])
        err = np.linalg.norm(run_observer(w, 0.6) - w, axis=1)
        assert np.all(np.diff(err) < 0.0)

    def test_f_est_z_sign(self):
        est = EstimatorState(ZERO6, np.array([0, 0, -15.0, 0, 0, 0]), np.eye(6))
        assert est.f_est_z == 15.0

    def test_gain_validation(self):
        with pytest.raises(ValueError):
            EstimatorState.start(InertiaModel(), ZERO6, -1.0)
