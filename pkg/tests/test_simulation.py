"""End-to-end behaviour of full 10 s runs at the default settings."""

import numpy as np
import pytest

from passalign import Disturbance, paper_group, simulate
from passalign.metrics import summarize

from sim_cache import group_run


def test_group2_aligns_without_slip():
    run = group_run(2)
    assert run.report.aligned and not run.report.slip
    assert run.report.steady_dcc_m < 1e-3
    # the summary is a pure function of the trace
    again = summarize(run.trace, steady_window=2.0, d_cc_tol=1e-3)
    assert again.aligned == run.report.aligned and again.slip == run.report.slip


def test_group1_slips():
    run = group_run(1)
    assert run.report.slip and run.report.slip_events > 0
    assert run.report.slip_distance_m > 1e-3


def test_force_sweep_ordering():
    runs = [group_run(2, 0, f) for f in (5.0, 10.0, 20.0)]
    dcc = [r.report.steady_dcc_m for r in runs]
    assert dcc[0] > dcc[1] > dcc[2]
    assert [r.report.aligned for r in runs] == [False, False, True]


def test_phase_contract():
    run = group_run(2)
    tr, sc = run.trace, run.result.scenario
    t, mode, f_ref = tr["t_s"], tr["mode"], tr["fref_n"]
    assert np.all(mode[t < sc.switch_time_s] == 0.0)
    on = np.nonzero(mode)[0]
    # the interaction mode latches once entered
    assert on.size and np.all(mode[on[0]:] == 1.0)
    assert tr.meta["t_contact_s"] == pytest.approx(t[on[0]])
    assert f_ref[on[0]] == 0.0 and np.all(f_ref[:on[0]] == 0.0)
    assert np.max(np.abs(np.diff(f_ref))) <= sc.f_ref_ramp_n_per_s * sc.dt_s + 1e-9
    assert f_ref[-1] == sc.f_ref_n


def test_trace_invariants():
    run = group_run(4)
    tr, sc = run.trace, run.result.scenario
    assert np.all(tr.pressures >= 0.0)
    loaded = tr["fn_total_n"] >= 0.5
    # friction never leaves the cone, so neither does the total ratio
    assert np.all(tr["mu"][loaded] <= sc.mu_s + 1e-9)
    q = np.vstack([tr["qw"], tr["qx"], tr["qy"], tr["qz"]])
    np.testing.assert_allclose(np.linalg.norm(q, axis=0), 1.0, atol=1e-12)
    assert set(np.unique(tr["i"])) <= {0.0, 1.0, 2.0, 3.0}


def test_divergence_yields_partial_trace():
    sc = paper_group(2, duration_s=4.0, disturbance=Disturbance(kind="constant", tau_max_nm=30.0),
                     max_tilt_deg=15.0)
    res = simulate(sc)
    assert res.trace.diverged and res.report.diverged and not res.report.aligned
    assert res.trace["t_s"][-1] < sc.duration_s - sc.dt_s
