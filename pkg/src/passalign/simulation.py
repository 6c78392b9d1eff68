"""Closed-loop simulation: free flight, controller switch, force ramp and hold."""

from dataclasses import dataclass
import math

import numpy as np

from .conditions import evaluate
from .contact import resolve_contact
from .controller import (
    FREE_FLIGHT,
    INTERACTION,
    EstimatorState,
    Reference,
    estimate_wrench,
    force_wrench,
    hybrid_wrench,
    motion_wrench,
)
from .dynamics import BodyState, coriolis_term, gravity_wrench, step
from .errors import NonFiniteState, OutOfValidRange
from .metrics import Trace, indicators_from_state, summarize
from .rotations import quat_to_matrix

UPRIGHT = np.array([1.0, 0.0, 0.0, 0.0])


@dataclass
class SimulationResult:
    scenario: object
    trace: Trace
    report: object


def f_ref_schedule(sc, t, t_contact):
    """Force reference: zero until contact, then a linear ramp to the target."""
    if t_contact is None or t < t_contact:
        return 0.0
    return min(sc.f_ref_n, sc.f_ref_ramp_n_per_s * (t - t_contact))


def selection_schedule(interacting):
    return INTERACTION if interacting else FREE_FLIGHT


def reference_at(sc, t, start, standoff, normal):
    """Motion reference before contact.

    Straight line from ``start`` to the standoff point over the approach time,
    hold until the switch time, then creep towards the surface at constant
    speed until a foot touches.
    """
    twist = np.zeros(6)  # reference is upright, so world == body here
    if sc.approach_time_s > 0.0 and t < sc.approach_time_s:
        vel_w = (standoff - start) / sc.approach_time_s
        twist[:3] = vel_w
        return Reference(start + t * vel_w, UPRIGHT, twist=twist)
    if t < sc.switch_time_s:
        return Reference(standoff, UPRIGHT)
    vel_w = -sc.creep_speed_m_per_s * np.asarray(normal)
    twist[:3] = vel_w
    return Reference(standoff + (t - sc.switch_time_s) * vel_w, UPRIGHT, twist=twist)


def simulate(sc):
    """Run one scenario and return its trace and summary report."""
    inertia = sc.inertia()
    geom = sc.geometry()
    surface = sc.surface()
    params = sc.contact_params()
    cfg = sc.controller()
    dt = sc.dt_s
    n_steps = int(round(sc.duration_s / dt))
    tau_d = sc.disturbance.sampler(sc.duration_s)
    start = sc.start_position()
    standoff = sc.standoff_position()

    state = BodyState.at_rest(start, UPRIGHT)
    est = EstimatorState.start(inertia, state.twist, sc.observer_gain_per_s)
    anchors = None
    integral = 0.0
    t_contact = None
    slide = 0.0
    hold = None
    rows = []
    diverged = False
    max_tilt = math.radians(sc.max_tilt_deg)

    for k in range(n_steps):
        t = k * dt
        res = resolve_contact(
            state.position, state.orientation, state.twist, geom, surface, params, anchors
        )
        anchors = res.anchors
        if t_contact is None and t >= sc.switch_time_s and res.contact_count > 0:
            # switch on first contact; the motion reference freezes here
            t_contact = t
            hold = Reference(state.position.copy(), UPRIGHT)
        interacting = t_contact is not None
        w_e = res.wrench_on_body.copy()
        w_e[3:5] += tau_d(t)

        ref = hold if interacting else reference_at(sc, t, start, standoff, surface.normal)
        f_ref = f_ref_schedule(sc, t, t_contact)
        if interacting:
            w_f, integral = force_wrench(est.f_est_z, integral, cfg, dt, f_ref)
        else:
            w_f = np.zeros(6)
        lam = selection_schedule(interacting)
        w_mot = motion_wrench(state, ref, inertia, cfg)
        C = coriolis_term(inertia, state.twist)
        g = -gravity_wrench(state.orientation, inertia.mass)
        w_a = hybrid_wrench(w_mot, w_f, C, g, lam)

        R = quat_to_matrix(state.orientation)
        ind = indicators_from_state(state.orientation, res, R @ w_f[:3], surface)
        normals = [f.normal_force for f in res.feet]
        rows.append((
            t, *state.position, *state.orientation, *state.twist,
            res.contact_count, ind.beta, ind.theta, ind.d_cc, ind.mu,
            res.total_f_n, res.total_f_t, *normals,
            est.f_est_z, f_ref, float(res.slipping),
            -res.wrench_on_body[2], float(interacting), slide,
        ))

        if ind.tilt > max_tilt or np.linalg.norm(state.position - ref.position) > sc.max_position_error_m:
            diverged = True
            break
        try:
            new_state = step(state, w_a, w_e, inertia, dt)
        except NonFiniteState:
            diverged = True
            break
        if interacting:
            slide += res.sliding_speed * dt
        est, _ = estimate_wrench(est, new_state.twist, w_a, inertia, g, C, dt)
        state = new_state

    meta = {"scenario": sc.name, "t_contact_s": t_contact}
    trace = Trace.from_rows(rows, diverged=diverged, meta=meta)
    try:
        cond = evaluate(sc.condition_inputs()).to_dict()
        mu_threshold = cond["min_mu_s"]
    except OutOfValidRange as exc:
        cond = {"error": str(exc)}
        mu_threshold = math.nan
    report = summarize(
        trace,
        steady_window=sc.steady_window_s,
        d_cc_tol=sc.d_cc_tol_m,
        conditions=cond,
        mu_threshold=mu_threshold,
    )
    report.scenario_hash = sc.digest()
    return SimulationResult(sc, trace, report)
