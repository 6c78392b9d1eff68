"""Body-frame rigid-body equations of motion and a fixed-step integrator.

The equations are ``M dv + C v + g = w_a + w_e`` with the twist ``v`` and all
wrenches expressed in the body frame at the CoM. ``g`` on the left-hand side
is the gravity *compensation* term, i.e. the negative of :func:`gravity_wrench`.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import NonFiniteState
from .rotations import cross3, quat_exp, quat_mul, quat_to_matrix

GRAVITY = 9.81
MAX_DT = 0.01


@dataclass(frozen=True)
class InertiaModel:
    mass: float = 3.0
    inertia: np.ndarray = field(default_factory=lambda: np.diag([0.03, 0.03, 0.05]))

    def __post_init__(self):
        J = np.asarray(self.inertia, dtype=float)
        if J.shape == (3,):
            J = np.diag(J)
        if J.shape != (3, 3) or not np.allclose(J, J.T, atol=1e-12):
            raise ValueError("inertia must be a symmetric 3x3 matrix")
        if not self.mass > 0.0:
            raise ValueError("mass must be positive")
        if np.linalg.eigvalsh(J).min() <= 0.0:
            raise ValueError("inertia must be positive definite")
        object.__setattr__(self, "inertia", J)

    @cached_property
    def M(self):
        M = np.zeros((6, 6))
        M[:3, :3] = self.mass * np.eye(3)
        M[3:, 3:] = self.inertia
        M.flags.writeable = False
        return M

    @cached_property
    def M_inv(self):
        Minv = np.linalg.inv(self.M)
        Minv.flags.writeable = False
        return Minv

    @cached_property
    def J_inv(self):
        Jinv = np.linalg.inv(self.inertia)
        Jinv.flags.writeable = False
        return Jinv


@dataclass(frozen=True)
class BodyState:
    position: np.ndarray
    orientation: np.ndarray
    twist: np.ndarray

    @classmethod
    def at_rest(cls, position=(0.0, 0.0, 0.0), orientation=(1.0, 0.0, 0.0, 0.0)):
        return cls(
            np.asarray(position, dtype=float),
            np.asarray(orientation, dtype=float),
            np.zeros(6),
        )

    @property
    def rotation(self):
        return quat_to_matrix(self.orientation)


def gravity_wrench(orientation, mass):
    """Wrench that gravity exerts on the body, in the body frame about the CoM."""
    R = quat_to_matrix(orientation)
    w = np.zeros(6)
    w[:3] = R.T @ np.array([0.0, 0.0, -GRAVITY * mass])
    return w


def coriolis_term(inertia, twist):
    """``C v = [m w x v_lin ; w x (J w)]``."""
    twist = np.asarray(twist, dtype=float)
    v, w = twist[:3], twist[3:]
    out = np.empty(6)
    out[:3] = inertia.mass * cross3(w, v)
    out[3:] = cross3(w, inertia.inertia @ w)
    return out


def acceleration(state, w_a, w_e, inertia):
    """Twist derivative implied by the equations of motion at ``state``."""
    g = -gravity_wrench(state.orientation, inertia.mass)
    rhs = np.asarray(w_a) + np.asarray(w_e) - coriolis_term(inertia, state.twist) - g
    return np.linalg.solve(inertia.M, rhs)


def step(state, w_a, w_e, inertia, dt, gyro_iters=4):
    """Advance one step of semi-implicit Euler.

    The twist is updated first with applied wrenches held constant over the
    step; the velocity-dependent Coriolis term is evaluated at the midpoint
    twist (fixed-point iterations), which keeps torque-free kinetic energy and
    angular-momentum magnitude from drifting. Position then moves with the
    new linear velocity and orientation with the exponential of the new
    angular velocity.
    """
    if not 0.0 < dt <= MAX_DT:
        raise ValueError(f"dt must lie in (0, {MAX_DT}] s, got {dt}")
    m = inertia.mass
    J = inertia.inertia
    R = quat_to_matrix(state.orientation)
    v0 = state.twist
    f = np.asarray(w_a, dtype=float) + np.asarray(w_e, dtype=float)
    f[:3] += R.T @ np.array([0.0, 0.0, -GRAVITY * m])
    Jinv = inertia.J_inv
    inv_m = 1.0 / m

    v_new = v0.copy()
    for _ in range(max(1, gyro_iters)):
        mid = 0.5 * (v0 + v_new)
        lin_mid, ang_mid = mid[:3], mid[3:]
        acc_lin = inv_m * f[:3] - cross3(ang_mid, lin_mid)
        acc_ang = Jinv @ (f[3:] - cross3(ang_mid, J @ ang_mid))
        v_new = v0 + dt * np.concatenate((acc_lin, acc_ang))

    p_new = state.position + dt * (R @ v_new[:3])
    q_new = quat_mul(state.orientation, quat_exp(v_new[3:] * dt))
    q_new = q_new / math.sqrt(float(q_new @ q_new))
    if not (np.all(np.isfinite(v_new)) and np.all(np.isfinite(p_new)) and np.all(np.isfinite(q_new))):
        raise NonFiniteState("integration produced a non-finite state")
    return BodyState(p_new, q_new, v_new)


def kinetic_energy(inertia, twist):
    twist = np.asarray(twist, dtype=float)
    return 0.5 * float(twist @ inertia.M @ twist)
