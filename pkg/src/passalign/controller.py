"""Hybrid motion/force controller and momentum-based external wrench observer."""

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .rotations import quat_conj, quat_log, quat_mul, quat_to_matrix

INTERACTION = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 1.0])
FREE_FLIGHT = np.ones(6)


def _pd(name, A):
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = np.diag(A)
    if A.shape != (6, 6):
        raise ValueError(f"{name} must be 6x6 or a 6-vector diagonal")
    if np.linalg.eigvalsh(0.5 * (A + A.T)).min() <= 0.0:
        raise ValueError(f"{name} must be positive definite")
    return A


@dataclass(frozen=True)
class ControllerConfig:
    D_v: np.ndarray = field(default_factory=lambda: np.diag([15.0, 15.0, 15.0, 0.5, 0.5, 0.5]))
    K_p: np.ndarray = field(default_factory=lambda: np.diag([30.0, 30.0, 30.0, 3.0, 3.0, 3.0]))
    k_p: float = 0.5
    k_i: float = 2.0
    lam: np.ndarray = field(default_factory=lambda: INTERACTION.copy())
    f_ref: float = 20.0
    integral_limit: float = 25.0

    def __post_init__(self):
        object.__setattr__(self, "D_v", _pd("D_v", self.D_v))
        object.__setattr__(self, "K_p", _pd("K_p", self.K_p))
        lam = np.asarray(self.lam, dtype=float)
        if not (np.array_equal(lam, INTERACTION) or np.array_equal(lam, FREE_FLIGHT)):
            raise ValueError("selection must be the interaction or free-flight pattern")
        object.__setattr__(self, "lam", lam)
        if not (self.k_p > 0.0 and self.k_i > 0.0):
            raise ValueError("PI gains must be positive")
        if self.integral_limit < 0.0:
            raise ValueError("integral_limit must be non-negative")

    def with_mode(self, interaction):
        return replace(self, lam=INTERACTION.copy() if interaction else FREE_FLIGHT.copy())


@dataclass(frozen=True)
class Reference:
    position: np.ndarray
    orientation: np.ndarray
    twist: np.ndarray = field(default_factory=lambda: np.zeros(6))
    accel: np.ndarray = field(default_factory=lambda: np.zeros(6))


def pose_error(position, orientation, ref):
    """Stacked body-frame position error and rotation-vector attitude error."""
    R = quat_to_matrix(orientation)
    e = np.empty(6)
    e[:3] = R.T @ (np.asarray(position) - ref.position)
    e[3:] = quat_log(quat_mul(quat_conj(ref.orientation), orientation))
    return e


def motion_wrench(state, ref, inertia, cfg):
    e_v = state.twist - ref.twist
    e_p = pose_error(state.position, state.orientation, ref)
    return inertia.M @ ref.accel - cfg.D_v @ e_v - cfg.K_p @ e_p


def force_wrench(f_est_z, integral, cfg, dt, f_ref=None):
    """PI force law along body z; returns ``(wrench, integral')``.

    The integral is clamped to ``+/- integral_limit`` (anti-windup).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    f_ref = cfg.f_ref if f_ref is None else f_ref
    e_f = f_est_z - f_ref
    lim = cfg.integral_limit
    integral = min(max(integral + e_f * dt, -lim), lim)
    w = np.zeros(6)
    w[2] = f_ref - cfg.k_p * e_f - cfg.k_i * integral
    return w, integral


def hybrid_wrench(w_mot, w_f, coriolis, g, lam):
    """``Lambda w_mot + w_f + C v + g``, the actuation wrench."""
    return np.asarray(lam) * np.asarray(w_mot) + np.asarray(w_f) + np.asarray(coriolis) + np.asarray(g)


@dataclass(frozen=True)
class EstimatorState:
    """Momentum observer memory: integrated model momentum and wrench estimate."""

    momentum: np.ndarray
    wrench: np.ndarray
    K_0: np.ndarray

    @classmethod
    def start(cls, inertia, twist, K_0=10.0):
        K = np.asarray(K_0, dtype=float)
        if K.ndim == 0:
            K = float(K) * np.eye(6)
        elif K.ndim == 1:
            K = np.diag(K)
        if np.linalg.eigvalsh(0.5 * (K + K.T)).min() <= 0.0:
            raise ValueError("K_0 must be positive definite")
        return cls(inertia.M @ np.asarray(twist, dtype=float), np.zeros(6), K)

    @property
    def f_est_z(self):
        # force the body exerts on the surface along +z_B
        return -float(self.wrench[2])


@lru_cache(maxsize=32)
def _observer_gain(K_bytes, dt):
    K = np.frombuffer(K_bytes).reshape(6, 6)
    return (np.eye(6) - expm(-K * dt)) / dt


def estimate_wrench(est, twist, w_a, inertia, g, coriolis, dt):
    """One observer update after the body reached ``twist``.

    ``w_a``, ``g`` and ``coriolis`` are the model terms that acted during the
    step (``g`` is the left-hand-side gravity term). With exact discretisation
    of the gain, a constant external wrench is tracked as
    ``w_e (1 - exp(-K_0 t))``.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    known = np.asarray(w_a) - np.asarray(coriolis) - np.asarray(g)
    momentum = est.momentum + dt * (known + est.wrench)
    gain = _observer_gain(est.K_0.tobytes(), dt)
    wrench = gain @ (inertia.M @ np.asarray(twist, dtype=float) - momentum)
    new = EstimatorState(momentum, wrench, est.K_0)
    return new, new.f_est_z
