"""Analytic contact-status layer: S-plane, driving-force split and friction bounds.

All functions are pure. Angles are radians, lengths metres, forces newtons.
The S-plane is the plane spanned by the surface normal ``n`` and the lever
``l_O`` (CoP -> CC); the driving force is split into its projection onto that
plane and the component along the plane normal.
"""

from dataclasses import dataclass, field
import math
from typing import NamedTuple

import numpy as np

from .rotations import cross3
from .errors import (
    BadContactCount,
    DegenerateSPlane,
    OutOfValidRange,
    WrongSide,
    ZeroForce,
    ZeroNormalForce,
)

EPS_LEN = 1e-6
EPS_ANGLE = 1e-6
EPS_FORCE = 1e-9

# |beta| at which 3 sin^2|beta| = 1
BETA_SINGULAR = math.asin(1.0 / math.sqrt(3.0))


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class SPlane:
    normal_s: np.ndarray
    in_plane_basis: tuple

    @property
    def normal(self):
        return self.in_plane_basis[1]


@dataclass(frozen=True)
class ForceDecomposition:
    f_plane: np.ndarray
    f_out: np.ndarray
    theta: float
    beta: float


class ContactRatio(NamedTuple):
    f_n: float
    f_t: float
    mu: float


@dataclass(frozen=True)
class EEGeometry:
    """Tripod end-effector: three feet on a circle of radius ``d_r`` around CC."""

    d_r: float = 0.0525
    foot_angles: tuple = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
    cc_offset: tuple = (0.0, 0.0, 0.1)
    tip_stiffness: float = 1.0e4
    tip_damping: float = 50.0
    _feet: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.d_r > 0.0:
            raise ValueError(f"d_r must be positive, got {self.d_r}")
        if len(self.foot_angles) != 3:
            raise ValueError("exactly three feet expected")
        a = sorted(float(x) % (2.0 * math.pi) for x in self.foot_angles)
        gaps = [a[1] - a[0], a[2] - a[1], a[0] + 2.0 * math.pi - a[2]]
        if any(abs(g - 2.0 * math.pi / 3.0) > 1e-9 for g in gaps):
            raise ValueError("feet must be spaced 120 degrees apart")
        cc = np.asarray(self.cc_offset, dtype=float)
        feet = np.array([
            cc + self.d_r * np.array([math.cos(t), math.sin(t), 0.0])
            for t in self.foot_angles
        ])
        object.__setattr__(self, "_feet", feet)

    @property
    def feet_body(self):
        """(3, 3) array of foot positions in the body frame."""
        return self._feet

    @property
    def cc_body(self):
        return np.asarray(self.cc_offset, dtype=float)


def build_s_plane(n, l_O, eps_len=EPS_LEN, eps_angle=EPS_ANGLE):
    """Construct the S-plane from the surface normal and the CoP->CC lever.

    Raises DegenerateSPlane when the lever is (near) zero or parallel to ``n``;
    callers map that case to beta = 0.
    """
    n = np.asarray(n, dtype=float)
    l_O = np.asarray(l_O, dtype=float)
    length = float(np.linalg.norm(l_O))
    if length <= eps_len:
        raise DegenerateSPlane(f"|l_O| = {length:.3g} m is below {eps_len:g} m")
    cross = cross3(n, l_O)
    sin_angle = float(np.linalg.norm(cross)) / length
    if sin_angle <= eps_angle:
        raise DegenerateSPlane("l_O is parallel to the surface normal")
    n_s = cross / np.linalg.norm(cross)
    # (e_t, n, n_s) is right-handed
    e_t = cross3(n, n_s)
    return SPlane(normal_s=n_s, in_plane_basis=(e_t, n.copy()))


def decompose_force(f_B, plane, n):
    """Split ``f_B`` into its S-plane projection and out-of-plane part.

    ``beta`` is the signed angle from ``-n`` to the in-plane part, positive
    for a right-handed rotation about ``plane.normal_s``.
    """
    f_B = np.asarray(f_B, dtype=float)
    n = np.asarray(n, dtype=float)
    if float(np.linalg.norm(f_B)) <= EPS_FORCE:
        raise ZeroForce("driving force is zero")
    if float(-(f_B @ n)) <= 0.0:
        raise WrongSide("driving force does not push toward the surface")
    n_s = plane.normal_s
    f_out = (f_B @ n_s) * n_s
    f_plane = f_B - f_out
    theta = math.atan2(float(np.linalg.norm(f_out)), float(np.linalg.norm(f_plane)))
    down = -n
    beta = math.atan2(float(cross3(down, f_plane) @ n_s), float(down @ f_plane))
    return ForceDecomposition(f_plane=f_plane, f_out=f_out, theta=theta, beta=beta)


def d_cc(l_O_len, beta):
    if l_O_len < 0.0:
        raise ValueError("lever length must be non-negative")
    return l_O_len * math.sin(abs(beta))


def l_o_bounds(i, d_r):
    """Admissible range of |l_O| for ``i`` feet in contact."""
    if d_r <= 0.0:
        raise ValueError("d_r must be positive")
    if i == 1:
        return (d_r, d_r)
    if i == 2:
        return (0.5 * d_r, d_r)
    if i == 3:
        return (0.0, d_r)
    raise BadContactCount(f"contact count must be 1, 2 or 3, got {i!r}")


def _check_beta(beta):
    s = math.sqrt(3.0) * math.sin(abs(beta))
    if not s < 1.0:
        raise OutOfValidRange(
            f"|beta| = {math.degrees(abs(beta)):.3f} deg is outside the valid range "
            f"(< {math.degrees(BETA_SINGULAR):.3f} deg)"
        )
    return s


def theta_max_bound(beta):
    """Supremum of the out-of-plane angle while one foot is in contact (exclusive)."""
    return math.asin(_check_beta(beta))


def contact_ratio(dec):
    """Normal force, friction force and their ratio induced by a decomposition."""
    fp = float(np.linalg.norm(dec.f_plane))
    fs = float(np.linalg.norm(dec.f_out))
    b = abs(dec.beta)
    f_n = fp * math.cos(b)
    if f_n <= EPS_FORCE:
        raise ZeroNormalForce("no normal force component")
    f_t = math.hypot(fp * math.sin(b), fs)
    return ContactRatio(f_n, f_t, f_t / f_n)


def mu_lim(beta):
    """Upper bound of the tangential/normal force ratio at tilt ``beta``."""
    _check_beta(beta)
    b = abs(beta)
    s2 = math.sin(b) ** 2
    return math.tan(b) * math.sqrt(1.0 + 3.0 / (1.0 - 3.0 * s2))
