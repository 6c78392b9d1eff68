"""Command line entry point: ``passalign {guideline,simulate,sweep,report}``."""

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from .conditions import DEFAULT_L_C, DEFAULT_MASS, ConditionInputs
from .errors import PassAlignError
from .harness import dump_json, guideline_command, run_scenario, run_sweep
from .metrics import Trace, summarize
from .scenario import Scenario

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DIVERGED = 3


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser():
    p = argparse.ArgumentParser(
        prog="passalign", description="Passive-alignment contact simulator and design-condition calculator."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="disturbance seed override")
    common.add_argument("--out-dir", type=Path, default=Path("runs"), help="output directory")
    common.add_argument("--dt", type=float, default=None, help="integration step override [s]")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("guideline", help="evaluate both alignment conditions")
    g.add_argument("--beta-max-deg", type=float, required=True)
    g.add_argument("--mu-s", type=float, default=0.6)
    g.add_argument("--eta", type=float, default=0.4)
    g.add_argument("--force-n", type=float, default=20.0)
    g.add_argument("--d-r-m", type=float, default=0.0525)
    g.add_argument("--tau-d-max-nm", type=float, default=0.5)
    g.add_argument("--mass-kg", type=float, default=DEFAULT_MASS)
    g.add_argument("--l-c-m", type=float, default=DEFAULT_L_C)

    s = sub.add_parser("simulate", parents=[common], help="run one scenario file")
    s.add_argument("scenario", type=Path)

    w = sub.add_parser("sweep", parents=[common], help="sweep one scalar scenario field")
    w.add_argument("scenario", type=Path)
    w.add_argument("--axis", required=True, help="f_ref, mu_s, beta0, tau_d, d_r or any float field")
    w.add_argument("--values", type=_float_list, required=True, help="comma separated")
    w.add_argument("--parallel", action="store_true", help="run the values in worker processes")

    r = sub.add_parser("report", help="recompute metrics from a trace CSV")
    r.add_argument("trace", type=Path)
    r.add_argument("--steady-window", type=float, default=2.0)
    r.add_argument("--d-cc-tol", type=float, default=1e-3)
    return p


def _load_scenario(args):
    sc = Scenario.load(args.scenario)
    if args.seed is not None:
        sc = replace(sc, disturbance=replace(sc.disturbance, seed=args.seed))
    if args.dt is not None:
        sc = replace(sc, dt_s=args.dt)
    return sc


def _cmd_guideline(args):
    inputs = ConditionInputs(
        beta_max=math.radians(args.beta_max_deg),
        mu_s=args.mu_s,
        eta=args.eta,
        f_B_mag=args.force_n,
        d_r=args.d_r_m,
        tau_d_max=args.tau_d_max_nm,
        mass=args.mass_kg,
        l_C_P=args.l_c_m,
    )
    guideline_command(inputs, stream=sys.stdout)
    return EXIT_OK


def _cmd_simulate(args):
    art = run_scenario(_load_scenario(args), args.out_dir)
    rep = art.report
    print(f"trace:  {art.trace_path}\nreport: {art.report_path}")
    print(f"aligned={rep.aligned} slip={rep.slip} diverged={rep.diverged} "
          f"steady_dcc_m={rep.steady_dcc_m:.3e}")
    return EXIT_DIVERGED if rep.diverged else EXIT_OK


def _cmd_sweep(args):
    runs = run_sweep(_load_scenario(args), args.axis, args.values, args.out_dir, parallel=args.parallel)
    print(f"aggregate: {args.out_dir / 'aggregate.csv'} ({len(runs)} runs)")
    return EXIT_DIVERGED if any(a.report.diverged for a in runs) else EXIT_OK


def _cmd_report(args):
    trace = Trace.read_csv(args.trace)
    rep = summarize(trace, steady_window=args.steady_window, d_cc_tol=args.d_cc_tol)
    sys.stdout.write(dump_json(rep.to_dict()))
    return EXIT_OK


COMMANDS = {
    "guideline": _cmd_guideline,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PassAlignError, ValueError, KeyError, OSError) as exc:
        print(f"passalign: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
