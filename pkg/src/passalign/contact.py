"""Penalty contact between the three spherical feet and a flat work surface.

Normal force: clamped Kelvin-Voigt spring on the penetration depth.
Tangential force: a spring-damper to a sticking anchor on the surface, capped
by the static friction cone. When the cap is hit the anchor is dragged along
and the foot is reported as slipping once its tangential speed exceeds
``v_eps``; sliding feet carry the kinetic friction force.

Anchors are the only memory of the model. They are passed in and returned
explicitly so :func:`resolve_contact` stays a pure function.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

from .rotations import cross3, quat_to_matrix

# loads below this are invisible to the pressure sensors (N)
SLIP_MIN_LOAD = 0.5


@dataclass(frozen=True)
class WorkSurface:
    point: np.ndarray
    normal: np.ndarray
    mu_s: float = 0.6
    mu_k: float = 0.5

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = float(np.linalg.norm(n))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"surface normal must be unit length, got |n| = {norm}")
        if self.mu_s < 0.0 or self.mu_k < 0.0:
            raise ValueError("friction coefficients must be non-negative")
        if self.mu_k > self.mu_s:
            raise ValueError("mu_k must not exceed mu_s")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))

    @classmethod
    def tilted(cls, point, tilt, azimuth=0.0, mu_s=0.6, mu_k=None):
        """Ceiling-like surface facing down, tilted by ``tilt`` rad.

        The surface is closest to the body along the horizontal direction
        ``(cos azimuth, sin azimuth, 0)``. With the body upright, its z-axis
        and ``-normal`` differ by exactly ``tilt``.
        """
        u = np.array([math.cos(azimuth), math.sin(azimuth), 0.0])
        n = -(math.sin(tilt) * u + np.array([0.0, 0.0, math.cos(tilt)]))
        if mu_k is None:
            mu_k = mu_s
        return cls(np.asarray(point, dtype=float), n, mu_s, mu_k)

    def signed_distance(self, p):
        return float((np.asarray(p) - self.point) @ self.normal)


@dataclass(frozen=True)
class ContactParams:
    k_n: float = 1.0e4
    c_n: float = 50.0
    k_t: float = 1.0e4
    c_t: float = 50.0
    v_eps: float = 1.0e-4


class FootContact(NamedTuple):
    foot_index: int
    in_contact: bool
    penetration: float
    normal_force: float
    tangential_force: np.ndarray
    slipping: bool
    position: np.ndarray
    velocity: np.ndarray


@dataclass(frozen=True)
class ContactResolution:
    feet: tuple
    contact_count: int
    cop: np.ndarray
    cop_valid: bool
    l_O: np.ndarray
    l_C: np.ndarray
    cc: np.ndarray
    wrench_on_body: np.ndarray
    total_f_n: float
    total_f_t: float
    anchors: tuple
    normal: np.ndarray

    @property
    def normal_forces(self):
        return np.array([f.normal_force for f in self.feet])

    @property
    def slipping(self):
        """Platform slip: sliding feet carry at least half of the normal load.

        A lightly loaded foot dragging while the body pivots about a sticking
        foot does not count, and neither does a grazing touch whose total load
        is below the pressure-sensing floor.
        """
        if self.total_f_n < SLIP_MIN_LOAD:
            return False
        sliding = sum(f.normal_force for f in self.feet if f.slipping)
        return sliding >= 0.5 * self.total_f_n

    @property
    def sliding_speed(self):
        """Load-weighted tangential speed of the sliding feet (m/s); 0 unless slipping."""
        if not self.slipping:
            return 0.0
        total = 0.0
        for f in self.feet:
            if f.slipping:
                v = f.velocity
                v_t = v - float(v @ self.normal) * self.normal
                total += f.normal_force * math.sqrt(float(v_t @ v_t))
        return total / self.total_f_n

    @property
    def any_foot_slipping(self):
        return any(f.slipping for f in self.feet)


def foot_positions(position, orientation, geom):
    """World positions of the three foot tips, shape (3, 3)."""
    R = quat_to_matrix(orientation)
    return np.asarray(position, dtype=float) + geom.feet_body @ R.T


def resolve_contact(position, orientation, twist, geom, surface, params=None, anchors=None):
    """Contact forces for the current pose/twist.

    ``anchors`` holds one surface point per foot (or None) from the previous
    call; the updated anchors are returned in the resolution.
    """
    if params is None:
        params = ContactParams()
    if anchors is None:
        anchors = (None, None, None)
    position = np.asarray(position, dtype=float)
    twist = np.asarray(twist, dtype=float)
    R = quat_to_matrix(orientation)
    n = surface.normal
    v_lin, omega = twist[:3], twist[3:]
    r_body = geom.feet_body
    feet_w = position + r_body @ R.T
    # velocity of each foot tip in world frame
    vel_w = (v_lin + np.cross(omega, r_body)) @ R.T  # (3, 3) batch: one call

    feet = []
    new_anchors = []
    force_w = np.zeros(3)
    torque_w = np.zeros(3)
    f_t_sum = np.zeros(3)
    fn_total = 0.0
    weighted = np.zeros(3)
    count = 0
    for j in range(3):
        p = feet_w[j]
        v = vel_w[j]
        s = float((p - surface.point) @ n)
        zero = np.zeros(3)
        if s >= 0.0:
            feet.append(FootContact(j + 1, False, 0.0, 0.0, zero, False, p, v))
            new_anchors.append(None)
            continue
        count += 1
        depth = -s
        v_n = float(v @ n)
        f_n = max(0.0, params.k_n * depth - params.c_n * v_n)
        c = p + depth * n
        v_t = v - v_n * n
        anchor = anchors[j]
        if f_n <= 0.0:
            # separating: no load, so nothing to stick or slide with
            feet.append(FootContact(j + 1, True, depth, 0.0, zero, False, p, v))
            new_anchors.append(None)
            continue
        if anchor is None:
            anchor = c
        disp = c - anchor
        disp = disp - float(disp @ n) * n
        trial = -params.k_t * disp - params.c_t * v_t
        trial_mag = math.sqrt(float(trial @ trial))
        cap = surface.mu_s * f_n
        slipping = False
        if trial_mag <= cap:
            f_t = trial
        else:
            speed = math.sqrt(float(v_t @ v_t))
            if speed > params.v_eps:
                slipping = True
                f_t = -(surface.mu_k * f_n / speed) * v_t
            else:
                f_t = trial * (cap / trial_mag)
            # drag the anchor so the spring carries exactly the capped force
            anchor = c + f_t / params.k_t
        new_anchors.append(anchor)
        f = f_n * n + f_t
        force_w += f
        torque_w += cross3(p - position, f)
        f_t_sum += f_t
        fn_total += f_n
        weighted += f_n * p
        feet.append(FootContact(j + 1, True, depth, f_n, f_t, slipping, p, v))

    cc = position + R @ geom.cc_body
    if count == 0:
        cop = np.full(3, np.nan)
        valid = False
    elif fn_total > 0.0:
        cop = weighted / fn_total
        valid = True
    else:
        cop = np.mean([f.position for f in feet if f.in_contact], axis=0)
        valid = True
    wrench = np.concatenate((R.T @ force_w, R.T @ torque_w))
    return ContactResolution(
        feet=tuple(feet),
        contact_count=count,
        cop=cop,
        cop_valid=valid,
        l_O=cc - cop,
        l_C=position - cop,
        cc=cc,
        wrench_on_body=wrench,
        total_f_n=fn_total,
        total_f_t=math.sqrt(float(f_t_sum @ f_t_sum)),
        anchors=tuple(new_anchors),
        normal=n,
    )


def pressure_readings(res, threshold=0.5):
    """Per-foot pressure values and whether each exceeds ``threshold``."""
    values = res.normal_forces if isinstance(res, ContactResolution) else np.asarray(res, dtype=float)
    return [(float(v), bool(v > threshold)) for v in values]
