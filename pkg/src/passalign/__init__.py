"""Passive-aligning physical interaction for fully-actuated aerial vehicles."""

from .conditions import (
    ConditionInputs,
    ConditionReport,
    check_condition1,
    check_condition2,
    evaluate,
    min_ee_radius,
    pendulum_accel,
    tau_e_p,
)
from .geometry import (
    EEGeometry,
    ForceDecomposition,
    SPlane,
    build_s_plane,
    contact_ratio,
    d_cc,
    decompose_force,
    l_o_bounds,
    mu_lim,
    theta_max_bound,
)
from .harness import RunArtifacts, guideline_command, run_scenario, run_sweep
from .metrics import Report, Trace, delta_metric, summarize
from .scenario import Disturbance, Scenario, paper_group
from .simulation import simulate

__version__ = "0.1.0"
