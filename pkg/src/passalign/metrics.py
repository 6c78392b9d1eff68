"""Contact-quality metrics, per-step indicators and run summaries."""

from dataclasses import asdict, dataclass, field
import csv
import io
import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSPlane, EmptySeries, TraceTooShort, WrongSide, ZeroForce, ZeroReference
from .geometry import build_s_plane, d_cc, decompose_force
from .rotations import quat_to_matrix

TRACE_COLUMNS = (
    "t_s", "px", "py", "pz", "qw", "qx", "qy", "qz",
    "vx", "vy", "vz", "wx", "wy", "wz",
    "i", "beta_rad", "theta_rad", "dcc_m", "mu", "fn_total_n", "ft_total_n",
    "p1_n", "p2_n", "p3_n", "fest_z_n", "fref_n", "slip_flag",
    # appended after the fixed schema so `report` can recompute everything
    "fmeas_z_n", "mode", "slide_m",
)

MIN_MEASURED_FORCE = 0.5


class Indicators(NamedTuple):
    beta: float
    theta: float
    d_cc: float
    d_cc_model: float
    mu: float
    tilt: float


def geometric_dcc(cc, feet, surface):
    """Height of CC above the surface, measured from the deepest foot along ``n``."""
    n = surface.normal
    heights = (np.asarray(feet) - surface.point) @ n
    return max(0.0, float((np.asarray(cc) - surface.point) @ n) - float(heights.min()))


def indicators_from_state(orientation, res, f_B_applied, surface):
    """beta, theta, d_CC (geometric and lever-based), mu and attitude tilt.

    beta and theta come from the S-plane decomposition while one or two feet
    touch. Full contact, no contact and a degenerate lever all map to beta = 0.
    """
    n = surface.normal
    R = quat_to_matrix(orientation)
    z_b = R[:, 2]
    tilt = math.acos(max(-1.0, min(1.0, float(-(z_b @ n)))))
    feet = np.array([f.position for f in res.feet])
    dcc_geo = geometric_dcc(res.cc, feet, surface)

    beta = theta = 0.0
    dcc_model = 0.0
    if res.contact_count in (1, 2) and res.cop_valid:
        f_B = np.asarray(f_B_applied, dtype=float)
        if float(np.linalg.norm(f_B)) <= 1e-9:
            # only the direction matters for the angles
            f_B = z_b
        try:
            plane = build_s_plane(n, res.l_O)
            dec = decompose_force(f_B, plane, n)
            beta, theta = dec.beta, dec.theta
        except DegenerateSPlane:
            pass
        except (WrongSide, ZeroForce):
            beta = theta = math.nan
        if math.isfinite(beta):
            dcc_model = d_cc(float(np.linalg.norm(res.l_O)), beta)
    if res.total_f_n >= MIN_MEASURED_FORCE:
        mu = res.total_f_t / res.total_f_n
    else:
        mu = math.nan
    return Indicators(beta, theta, dcc_geo, dcc_model, mu, tilt)


def delta_metric(pressure_series, f_meas_z_series, min_force=MIN_MEASURED_FORCE):
    """Average over feet of the RMSE between normalised pressure and 1.

    Each sample is normalised by its own ideal share ``|f_meas_z| / 3``.
    Samples with ``|f_meas_z| < min_force`` are dropped.
    """
    S = np.atleast_2d(np.asarray(pressure_series, dtype=float))
    f = np.abs(np.asarray(f_meas_z_series, dtype=float)).ravel()
    if S.shape[0] != 3 and S.shape[1] == 3:
        S = S.T
    if S.shape[0] != 3:
        raise ValueError("pressure series must have three rows")
    if f.size == 0 or S.shape[1] == 0:
        raise EmptySeries("no samples")
    if S.shape[1] != f.size:
        raise ValueError("pressure and force series differ in length")
    keep = f >= min_force
    if not keep.any():
        raise ZeroReference("measured force is below the reference floor in every sample")
    ratio = S[:, keep] / (f[keep] / 3.0)
    rmse = np.sqrt(np.mean((ratio - 1.0) ** 2, axis=1))
    return float(rmse.mean())


@dataclass
class Trace:
    """Column store of a simulation run; one row per step."""

    data: dict
    diverged: bool = False
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows, diverged=False, meta=None):
        arr = np.asarray(rows, dtype=float).reshape(-1, len(TRACE_COLUMNS))
        return cls({c: arr[:, k] for k, c in enumerate(TRACE_COLUMNS)}, diverged, dict(meta or {}))

    def __getitem__(self, key):
        return self.data[key]

    def __len__(self):
        return len(self.data["t_s"])

    @property
    def pressures(self):
        return np.vstack([self.data["p1_n"], self.data["p2_n"], self.data["p3_n"]])

    def to_csv(self):
        buf = io.StringIO()
        buf.write(",".join(TRACE_COLUMNS) + "\n")
        cols = [self.data[c] for c in TRACE_COLUMNS]
        for k in range(len(self)):
            buf.write(",".join(repr(float(col[k])) for col in cols))
            buf.write("\n")
        return buf.getvalue()

    @classmethod
    def read_csv(cls, path):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(x) for x in row] for row in reader if row]
        arr = np.asarray(rows, dtype=float).reshape(-1, len(header))
        data = {c: arr[:, k] for k, c in enumerate(header)}
        missing = [c for c in TRACE_COLUMNS if c not in data]
        if missing:
            raise ValueError(f"trace is missing columns: {missing}")
        return cls(data)


@dataclass
class Report:
    conditions: dict
    steady_dcc_m: float
    steady_beta_rad: float
    delta: float
    max_mu: float
    mu_threshold: float
    slip: bool
    slip_distance_m: float
    slip_events: int
    aligned: bool
    diverged: bool
    settling_time_s: float
    steady_window_s: float
    scenario_hash: str = ""

    def to_dict(self):
        return asdict(self)


def summarize(trace, steady_window=2.0, d_cc_tol=1e-3, conditions=None, mu_threshold=math.nan):
    """Reduce a trace to alignment, slip, delta and friction-ratio figures.

    ``slip`` is true when any step of the interaction phase was flagged as a
    platform slip; ``slip_distance_m`` is the load-weighted distance slid.
    """
    t = trace["t_s"]
    too_short = len(t) < 2 or t[-1] - t[0] <= steady_window
    if too_short and not (trace.diverged and len(t) > 0):
        raise TraceTooShort(f"trace spans {t[-1] - t[0] if len(t) else 0:.3f} s, window is {steady_window} s")
    mode = trace["mode"] > 0.5
    steady = t >= t[-1] - steady_window
    count = trace["i"]
    slip_flags = trace["slip_flag"] > 0.5

    steady_dcc = float(np.mean(trace["dcc_m"][steady]))
    steady_beta = float(np.mean(np.abs(trace["beta_rad"][steady])))
    slide = trace["slide_m"]
    slid = float(slide[-1] - slide[mode][0]) if mode.any() else 0.0
    slip_events = int(np.count_nonzero(slip_flags & mode))
    slip = slip_events > 0
    aligned = bool(
        not trace.diverged
        and np.all(count[steady] == 3)
        and steady_dcc < d_cc_tol
        and not np.any(slip_flags & steady)
    )

    try:
        delta = delta_metric(trace.pressures[:, mode], trace["fmeas_z_n"][mode])
    except (EmptySeries, ZeroReference):
        delta = math.nan

    mu = trace["mu"][mode]
    mu = mu[np.isfinite(mu)]
    max_mu = float(mu.max()) if mu.size else math.nan

    settling = math.nan
    if aligned and mode.any():
        t_switch = float(t[mode][0])
        bad = np.nonzero(count != 3)[0]
        t_last_bad = float(t[bad[-1]]) if bad.size else t_switch
        settling = max(0.0, t_last_bad - t_switch)

    return Report(
        conditions=dict(conditions or {}),
        steady_dcc_m=steady_dcc,
        steady_beta_rad=steady_beta,
        delta=delta,
        max_mu=max_mu,
        mu_threshold=mu_threshold,
        slip=slip,
        slip_distance_m=slid,
        slip_events=slip_events,
        aligned=aligned,
        diverged=bool(trace.diverged),
        settling_time_s=settling,
        steady_window_s=steady_window,
    )
