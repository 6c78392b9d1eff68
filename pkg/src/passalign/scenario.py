"""Scenario configuration: JSON files with unit-suffixed keys."""

from dataclasses import asdict, dataclass, field, fields, replace
import hashlib
import json
import math

import numpy as np

from .conditions import ConditionInputs
from .contact import ContactParams, WorkSurface
from .controller import ControllerConfig
from .dynamics import MAX_DT, InertiaModel
from .errors import UnknownAxis
from .geometry import EEGeometry

DISTURBANCE_KINDS = ("none", "constant", "sinusoid", "random")


@dataclass(frozen=True)
class Disturbance:
    """Torque about body x/y; its magnitude never exceeds ``tau_max_nm``."""

    kind: str = "random"
    tau_max_nm: float = 0.5
    direction_deg: float = 0.0
    freq_hz: float = 1.0
    update_hz: float = 10.0
    seed: int = 0
    interpolate: bool = True

    def __post_init__(self):
        if self.kind not in DISTURBANCE_KINDS:
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        if self.tau_max_nm < 0.0:
            raise ValueError("disturbance amplitude must be non-negative")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random disturbances need a seed")
        if self.update_hz <= 0.0:
            raise ValueError("update_hz must be positive")

    def sampler(self, duration):
        """Return ``tau(t) -> (tx, ty)``; deterministic for a given seed."""
        a = self.tau_max_nm
        phi = math.radians(self.direction_deg)
        u = np.array([math.cos(phi), math.sin(phi)])
        if self.kind == "none" or a == 0.0:
            return lambda t: np.zeros(2)
        if self.kind == "constant":
            return lambda t: a * u
        if self.kind == "sinusoid":
            w = 2.0 * math.pi * self.freq_hz
            return lambda t: a * math.sin(w * t) * u
        rng = np.random.default_rng(self.seed)
        n = int(math.ceil(duration * self.update_hz)) + 2
        mags = rng.uniform(0.0, a, size=n)
        angles = rng.uniform(0.0, 2.0 * math.pi, size=n)
        knots = np.column_stack((mags * np.cos(angles), mags * np.sin(angles)))
        rate = self.update_hz

        if not self.interpolate:
            def tau(t):
                return knots[min(int(t * rate + 1e-9), n - 1)]
            return tau

        # linear blend of two vectors inside the disc stays inside the disc
        def tau(t):
            x = min(max(t * rate, 0.0), n - 1.0)
            k = min(int(x), n - 2)
            s = x - k
            return (1.0 - s) * knots[k] + s * knots[k + 1]

        return tau


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    # body
    mass_kg: float = 3.0
    inertia_diag_kgm2: tuple = (0.03, 0.03, 0.05)
    # end-effector
    d_r_m: float = 0.0525
    cc_offset_m: tuple = (0.0, 0.0, 0.1)
    # surface
    beta0_deg: float = 6.0
    tilt_azimuth_deg: float = 0.0
    mu_s: float = 0.6
    mu_k: float = 0.6
    # realised friction as a fraction of the nominal mu_s / mu_k (friction uncertainty)
    friction_scale: float = 1.0
    standoff_m: float = 0.01
    approach_distance_m: float = 0.05
    # contact
    k_n_n_per_m: float = 1.0e5
    c_n_ns_per_m: float = 700.0
    k_t_n_per_m: float = 1.0e4
    c_t_ns_per_m: float = 50.0
    v_eps_m_per_s: float = 1.0e-4
    # controller
    kp_lin_n_per_m: float = 30.0
    kd_lin_ns_per_m: float = 15.0
    kp_ang_nm_per_rad: float = 20.0
    kd_ang_nms_per_rad: float = 1.2
    force_kp: float = 0.5
    force_ki_per_s: float = 2.0
    integral_limit_ns: float = 25.0
    observer_gain_per_s: float = 10.0
    f_ref_n: float = 20.0
    f_ref_ramp_n_per_s: float = 400.0
    # timing
    dt_s: float = 1.0e-3
    duration_s: float = 10.0
    approach_time_s: float = 0.5
    switch_time_s: float = 1.0
    creep_speed_m_per_s: float = 0.02
    # disturbance
    disturbance: Disturbance = field(default_factory=Disturbance)
    # evaluation
    eta: float = 0.4
    steady_window_s: float = 2.0
    d_cc_tol_m: float = 1.0e-3
    pressure_threshold_n: float = 0.5
    max_tilt_deg: float = 45.0
    max_position_error_m: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.dt_s <= MAX_DT:
            raise ValueError(f"dt_s must lie in (0, {MAX_DT}] s, got {self.dt_s}")
        if not self.duration_s > self.switch_time_s:
            raise ValueError("duration_s must exceed switch_time_s")
        if self.approach_time_s > self.switch_time_s:
            raise ValueError("approach must finish before the controller switch")
        if not self.creep_speed_m_per_s > 0.0:
            raise ValueError("creep speed must be positive")
        if not 0.0 < self.friction_scale <= 1.0:
            raise ValueError("friction_scale must lie in (0, 1]")
        if self.f_ref_ramp_n_per_s <= 0.0:
            raise ValueError("f_ref ramp rate must be positive")
        if isinstance(self.disturbance, dict):
            object.__setattr__(self, "disturbance", Disturbance(**self.disturbance))
        object.__setattr__(self, "inertia_diag_kgm2", tuple(float(x) for x in self.inertia_diag_kgm2))
        object.__setattr__(self, "cc_offset_m", tuple(float(x) for x in self.cc_offset_m))

    # -- builders -----------------------------------------------------------

    def inertia(self):
        return InertiaModel(self.mass_kg, np.diag(self.inertia_diag_kgm2))

    def geometry(self):
        return EEGeometry(
            d_r=self.d_r_m,
            cc_offset=self.cc_offset_m,
            tip_stiffness=self.k_n_n_per_m,
            tip_damping=self.c_n_ns_per_m,
        )

    def contact_params(self):
        return ContactParams(
            self.k_n_n_per_m, self.c_n_ns_per_m, self.k_t_n_per_m, self.c_t_ns_per_m, self.v_eps_m_per_s
        )

    def controller(self):
        lin, ang = [self.kp_lin_n_per_m] * 3, [self.kp_ang_nm_per_rad] * 3
        dlin, dang = [self.kd_lin_ns_per_m] * 3, [self.kd_ang_nms_per_rad] * 3
        return ControllerConfig(
            D_v=np.diag(dlin + dang),
            K_p=np.diag(lin + ang),
            k_p=self.force_kp,
            k_i=self.force_ki_per_s,
            f_ref=self.f_ref_n,
            integral_limit=self.integral_limit_ns,
        )

    def surface(self):
        """Surface placed so the nearest foot is ``standoff_m`` away at the standoff pose."""
        tilt = math.radians(self.beta0_deg)
        az = math.radians(self.tilt_azimuth_deg)
        mu_s, mu_k = self.mu_s * self.friction_scale, self.mu_k * self.friction_scale
        n = WorkSurface.tilted(np.zeros(3), tilt, az).normal
        feet = self.geometry().feet_body  # standoff pose is upright at the origin
        nearest = feet[int(np.argmin(feet @ n))]
        return WorkSurface(nearest - self.standoff_m * n, n, mu_s, mu_k)

    def standoff_position(self):
        return np.zeros(3)

    def start_position(self):
        return self.standoff_position() + self.approach_distance_m * self.surface().normal

    def condition_inputs(self):
        return ConditionInputs(
            beta_max=math.radians(self.beta0_deg),
            mu_s=self.mu_s,
            eta=self.eta,
            f_B_mag=self.f_ref_n,
            d_r=self.d_r_m,
            tau_d_max=self.disturbance.tau_max_nm,
        )

    # -- serialisation ------------------------------------------------------

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def digest(self):
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def with_value(self, axis, value):
        """Copy with one scalar field changed; accepts short axis aliases."""
        key = AXIS_ALIASES.get(axis, axis)
        if key == "tau_d_max_nm":
            return replace(self, disturbance=replace(self.disturbance, tau_max_nm=float(value)))
        if key == "seed":
            return replace(self, disturbance=replace(self.disturbance, seed=int(value)))
        if key not in SWEEP_AXES:
            raise UnknownAxis(axis)
        return replace(self, **{key: float(value)})


SWEEP_AXES = {
    f.name for f in fields(Scenario)
    if f.type in ("float", float) and f.name not in ("dt_s",)
} | {"tau_d_max_nm", "seed"}

AXIS_ALIASES = {
    "f_ref": "f_ref_n",
    "mu_s": "mu_s",
    "beta0": "beta0_deg",
    "tau_d": "tau_d_max_nm",
    "tau_d_max": "tau_d_max_nm",
    "d_r": "d_r_m",
}


def paper_group(group, **overrides):
    """The four friction/tilt groups: tilt range bound (deg) and mu_s per group."""
    table = {
        1: (6.0, 0.1),
        2: (6.0, 0.6),
        3: (11.0, 0.6),
        4: (11.0, 1.2),
    }
    beta, mu = table[group]
    base = dict(name=f"group{group}", beta0_deg=beta, mu_s=mu, mu_k=mu)
    base.update(overrides)
    return Scenario(**base)
