"""Run orchestration and on-disk artifacts: single runs, sweeps and guidelines."""

import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .conditions import evaluate
from .errors import UnknownAxis
from .metrics import Report
from .scenario import AXIS_ALIASES, SWEEP_AXES
from .simulation import simulate

AGGREGATE_FIELDS = (
    "run", "axis", "value", "aligned", "slip", "diverged", "steady_dcc_m",
    "steady_beta_rad", "delta", "max_mu", "mu_threshold", "slip_distance_m",
    "slip_events", "settling_time_s", "scenario_hash",
)


@dataclass(frozen=True)
class RunArtifacts:
    trace_path: Path
    report_path: Path
    scenario_path: Path
    report: Report


def _jsonable(obj):
    # NaN/inf are not valid JSON; emit null instead
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dump_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` so readers never observe a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        os.chmod(tmp, 0o644)
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_scenario(sc, out_dir):
    """Simulate ``sc`` and write trace.csv, report.json and scenario.json to ``out_dir``."""
    out = Path(out_dir)
    result = simulate(sc)
    report = result.report
    payload = report.to_dict()
    payload["scenario_name"] = sc.name
    payload["t_contact_s"] = result.trace.meta.get("t_contact_s")
    paths = RunArtifacts(out / "trace.csv", out / "report.json", out / "scenario.json", report)
    write_atomic(paths.scenario_path, sc.to_json() + "\n")
    write_atomic(paths.trace_path, result.trace.to_csv())
    write_atomic(paths.report_path, dump_json(payload))
    return paths


def _check_axis(axis):
    key = AXIS_ALIASES.get(axis, axis)
    if key not in SWEEP_AXES:
        raise UnknownAxis(axis)
    return key


def _sweep_job(args):
    sc, out_dir = args
    return run_scenario(sc, out_dir)


def run_sweep(base, axis, values, out_dir, parallel=False, max_workers=None):
    """One run per value of ``axis``; returns the artifacts and writes aggregate.csv.

    Each run lands in its own ``run_XXX`` directory, so serial and parallel
    execution produce identical files.
    """
    _check_axis(axis)
    out = Path(out_dir)
    values = list(values)
    jobs = []
    for k, v in enumerate(values):
        sc = replace(base.with_value(axis, v), name=f"{base.name}-{axis}={v}")
        jobs.append((sc, out / f"run_{k:03d}"))

    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            runs = list(pool.map(_sweep_job, jobs))
    else:
        runs = [_sweep_job(j) for j in jobs]

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=AGGREGATE_FIELDS, lineterminator="\n")
    writer.writeheader()
    for k, (v, art) in enumerate(zip(values, runs)):
        rep = art.report.to_dict()
        row = {f: rep.get(f) for f in AGGREGATE_FIELDS}
        row.update(run=f"run_{k:03d}", axis=axis, value=v)
        writer.writerow(row)
    write_atomic(out / "aggregate.csv", buf.getvalue())
    return runs


def guideline_command(inputs, stream=None):
    """Evaluate the conditions for ``inputs`` and print the report as JSON."""
    report = evaluate(inputs)
    text = dump_json(report.to_dict(rounded=True))
    if stream is not None:
        stream.write(text)
    return report, text
