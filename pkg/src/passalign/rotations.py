"""Small quaternion toolkit. Quaternions are ``[w, x, y, z]`` and map body to world."""

import math

import numpy as np


def skew(v):
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def quat_normalize(q):
    q = np.asarray(q, dtype=float)
    n = math.sqrt(float(q @ q))
    if n < 1e-12:
        raise ValueError("zero-norm quaternion")
    return q / n


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_to_matrix(q):
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def quat_exp(rotvec):
    """Quaternion of the rotation ``rotvec`` (axis * angle)."""
    rotvec = np.asarray(rotvec, dtype=float)
    angle = math.sqrt(float(rotvec @ rotvec))
    half = 0.5 * angle
    if angle < 1e-8:
        # second-order series keeps the result unit-norm to machine precision
        s = 0.5 - angle * angle / 48.0
    else:
        s = math.sin(half) / angle
    return np.array([math.cos(half), s * rotvec[0], s * rotvec[1], s * rotvec[2]])


def quat_log(q):
    """Rotation vector of ``q``, taking the short way round (angle in [0, pi])."""
    q = np.asarray(q, dtype=float)
    if q[0] < 0.0:
        q = -q
    v = q[1:]
    s = math.sqrt(float(v @ v))
    if s < 1e-12:
        return 2.0 * v
    angle = 2.0 * math.atan2(s, q[0])
    return v * (angle / s)


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    return quat_exp(axis / np.linalg.norm(axis) * angle)


def cross3(a, b):
    """Cross product of two 3-vectors; much cheaper than ``np.cross`` per call."""
    a0, a1, a2 = a
    b0, b1, b2 = b
    return np.array((a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0))
