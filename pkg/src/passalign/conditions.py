"""Friction-ensuring and rotation-ensuring conditions plus design calculators."""

from dataclasses import asdict, dataclass
import math
from typing import NamedTuple

from .errors import OutOfValidRange, ZeroForce, ZeroInertia
from .geometry import mu_lim

DEFAULT_MASS = 3.0
DEFAULT_L_C = 0.3


class Condition1(NamedTuple):
    satisfied: bool
    margin: float
    min_mu_s: float


class Condition2(NamedTuple):
    satisfied: bool
    margin: float
    min_force: float


def _rotation_factor(beta_max):
    s2 = math.sin(abs(beta_max)) ** 2
    r = 1.0 - 3.0 * s2
    if not r > 0.0:
        raise OutOfValidRange(
            f"|beta|_max = {math.degrees(abs(beta_max)):.3f} deg gives 3 sin^2|beta| >= 1"
        )
    return math.sqrt(r)


def check_condition1(beta_max, mu_s, eta):
    """Friction-ensuring condition ``mu_lim(|beta|_max) <= eta * mu_s``."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if mu_s < 0.0:
        raise ValueError("mu_s must be non-negative")
    lim = mu_lim(beta_max)
    margin = eta * mu_s - lim
    return Condition1(margin >= 0.0, margin, lim / eta)


def check_condition2(f_B_mag, beta_max, d_r, tau_d_max):
    """Rotation-ensuring condition on the driving force against ``|tau_d|_max``."""
    if d_r <= 0.0:
        raise ValueError("d_r must be positive")
    if f_B_mag < 0.0 or tau_d_max < 0.0:
        raise ValueError("force and disturbance bound must be non-negative")
    lever = _rotation_factor(beta_max) * d_r / 2.0
    lhs = f_B_mag * lever
    return Condition2(lhs > tau_d_max, lhs - tau_d_max, tau_d_max / lever)


def min_ee_radius(f_B_mag, beta_max, tau_d_max):
    """Smallest foot-circle radius for which Condition 2 holds with equality."""
    if f_B_mag <= 0.0:
        raise ZeroForce("driving force must be positive")
    return 2.0 * tau_d_max / (f_B_mag * _rotation_factor(beta_max))


def tau_e_p(f_plane_mag, l_O_len, beta):
    """Signed in-plane torque of the driving force about the CoP.

    The sign is chosen so the torque always drives ``beta`` toward zero.
    """
    mag = f_plane_mag * l_O_len
    if beta == 0.0 or mag == 0.0:
        return 0.0
    return -math.copysign(mag, beta)


def pendulum_accel(mass, l_C_P, tau_ep, tau_d):
    inertia = mass * l_C_P ** 2
    if inertia <= 1e-12:
        raise ZeroInertia("pendulum inertia m |l_C|_P^2 is zero")
    return (tau_ep - tau_d) / inertia


@dataclass(frozen=True)
class ConditionInputs:
    beta_max: float
    mu_s: float
    eta: float
    f_B_mag: float
    d_r: float
    tau_d_max: float
    mass: float = DEFAULT_MASS
    l_C_P: float = DEFAULT_L_C

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        for name in ("mu_s", "f_B_mag", "d_r", "tau_d_max", "mass", "l_C_P"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class ConditionReport:
    cond1_satisfied: bool
    cond1_margin: float
    min_mu_s: float
    cond2_satisfied: bool
    cond2_margin: float
    min_force: float
    min_d_r: float
    mu_lim: float
    theta_max: float
    eta: float

    def to_dict(self, rounded=True):
        out = asdict(self)
        if rounded:
            # display values as a practitioner would quote them
            lim_1dp = round(self.mu_lim, 1)
            out["display"] = {
                "mu_lim": lim_1dp,
                "min_mu_s": round(lim_1dp / self.eta, 2),
                "min_force": round(self.min_force, 1),
                "min_d_r": round(self.min_d_r, 4),
            }
        return out


def evaluate(inputs):
    """Evaluate both conditions and the derived design limits."""
    c1 = check_condition1(inputs.beta_max, inputs.mu_s, inputs.eta)
    c2 = check_condition2(inputs.f_B_mag, inputs.beta_max, inputs.d_r, inputs.tau_d_max)
    if inputs.f_B_mag > 0.0:
        min_d_r = min_ee_radius(inputs.f_B_mag, inputs.beta_max, inputs.tau_d_max)
    else:
        min_d_r = math.inf
    return ConditionReport(
        cond1_satisfied=c1.satisfied,
        cond1_margin=c1.margin,
        min_mu_s=c1.min_mu_s,
        cond2_satisfied=c2.satisfied,
        cond2_margin=c2.margin,
        min_force=c2.min_force,
        min_d_r=min_d_r,
        mu_lim=mu_lim(inputs.beta_max),
        theta_max=math.asin(math.sqrt(3.0) * math.sin(abs(inputs.beta_max))),
        eta=inputs.eta,
    )
