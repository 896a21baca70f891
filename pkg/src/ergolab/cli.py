"""Deterministic experiment runner.

    ergolab run <config> [--out DIR] [--threads K] [--seed S]
    ergolab batch <manifest> [--out DIR] [--threads K]

Each run writes a CSV (columns fixed per experiment kind) and a JSON
summary with fields experiment, verdict, final_value, tolerance, seed,
version.  Exit codes: 0 = verdict pass, 2 = verdict fail, 1 = error.

Determinism contract: identical (config, seed) produce byte-identical CSV,
and the numeric fields do not depend on the thread count (all reductions
are fixed-order).  Wall time appears only in the JSON summary and is the
one field allowed to differ between runs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .averages import (Arc, Box, CyclicSubset, GridMask,
                       joint_ergodicity_diagnostic, recurrence_average,
                       recurrence_filtered)
from .config import (ConfigError, ExperimentConfig, parse_config, parse_observable,
                     parse_profile, parse_schedule, parse_y_schedule)
from .expsums import equidist_verdict, exp_sum_series, vdc_bound, weyl_detect
from .flows import (change_of_variables_check, flow_average, joint_flow_diagnostic,
                    parse_flow_speeds, parse_time_change, stability_check)
from .numutil import counter_rng
from .seminorms import gcs_check, monotonicity_report
from .sequences import parse_sequence
from .systems import Cyclic, Observable, spectrum, system_from_text


@dataclass
class RunReport:
    experiment: str
    verdict: str                 # "pass" | "fail"
    final_value: float
    tolerance: float
    seed: int
    config_echo: str
    csv_text: str
    extra_text: str | None = None   # per-tuple records etc.
    wall_time_s: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def summary_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "verdict": self.verdict,
            "final_value": self.final_value,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "version": __version__,
            "note": self.note,
            "config_echo": self.config_echo,
            "wall_time_s": round(self.wall_time_s, 3),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv(header: str, rows: list[list]) -> str:
    lines = [header]
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, float):
                cells.append(repr(x))
            else:
                cells.append(str(x))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _split_list(raw: str) -> list[str]:
    return [p.strip() for p in raw.split("|") if p.strip()]


# ---------------------------------------------------------------------------
# experiment dispatch
# ---------------------------------------------------------------------------


def run_experiment(cfg: ExperimentConfig, threads: int = 1,
                   seed_override: int | None = None) -> RunReport:
    t0 = time.time()
    seed = seed_override if seed_override is not None else cfg.get_int("seed", 0)
    handler = _HANDLERS[cfg.kind]
    report = handler(cfg, threads, seed)
    report.wall_time_s = time.time() - t0
    return report


def _run_average(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    system = system_from_text(cfg.require("system"))
    seqs = [parse_sequence(s) for s in _split_list(cfg.require("seqs"))]
    observables = [parse_observable(o, system.dim)
                   for o in _split_list(cfg.require("observables"))]
    schedule = parse_schedule(cfg.require("schedule"))
    tol = cfg.get_float("tol", 0.05)
    d_max = cfg.get_int("d_max", 64)
    rep = joint_ergodicity_diagnostic(system, seqs, observables, schedule,
                                      tol=tol, degree_cap=d_max)
    expected = cfg.get("expect", "converging-to-product")
    verdict = "pass" if rep.verdict == expected else "fail"
    csv_text = _csv("N,distance", [[n, d] for n, d in zip(rep.schedule, rep.distances)])
    return RunReport(experiment="average", verdict=verdict,
                     final_value=rep.distances[-1], tolerance=tol, seed=seed,
                     config_echo=cfg.echo(), csv_text=csv_text,
                     note=f"verdict={rep.verdict}; {rep.note}")


def _run_seminorm(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    from .seminorms import seminorm_box, seminorm_iterative
    system = system_from_text(cfg.require("system"))
    f = parse_observable(cfg.require("observable"), system.dim)
    s_max = cfg.get_int("s_max", 3)
    n = cfg.get_int("n", 256)
    slack = cfg.get_float("slack", 0.05)
    estimator = cfg.get("estimator", "box")
    budget = cfg.get_int("budget", 10**8)
    if estimator == "box":
        rep = monotonicity_report(system, f, s_max, n, slack=slack)
        estimates = rep.estimates
        violations = rep.violations
    else:
        if estimator == "iterative":
            estimates = [seminorm_iterative(system, f, s, n) for s in range(1, s_max + 1)]
        elif estimator == "subsampled":
            estimates = [seminorm_box(system, f, s, n, estimator="subsampled",
                                      seed=seed, budget=budget)
                         for s in range(1, s_max + 1)]
        else:
            raise ConfigError(0, f"unknown estimator {estimator!r}")
        violations = [s for s in range(1, s_max)
                      if estimates[s].value < estimates[s - 1].value - slack]
    rows = [[est.s, est.n, est.estimator, est.raw, est.value] for est in estimates]
    csv_text = _csv("s,N,estimator,raw,value", rows)
    verdict = "pass" if not violations else "fail"
    return RunReport(experiment="seminorm", verdict=verdict,
                     final_value=estimates[-1].value, tolerance=slack, seed=seed,
                     config_echo=cfg.echo(), csv_text=csv_text,
                     note=f"violations at s={violations}" if violations else "monotone")


def _run_equidist(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    system = system_from_text(cfg.require("system"))
    seqs = [parse_sequence(s) for s in _split_list(cfg.require("seqs"))]
    spec_set = spectrum(system, cfg.get_int("k_max", 2))
    mode = cfg.get("mode", "full")
    n_max = cfg.get_int("n_max", 10**4)
    tol = cfg.get_float("tol", 0.05)
    sample = cfg.get_int("sample", None)
    verdict_obj = equidist_verdict(seqs, spec_set, mode, n_max, tol,
                                   sample=sample, seed=seed)
    records = []
    worst = None
    for rec in verdict_obj.records:
        records.append(json.dumps({
            "t": [repr(float(t)) for t in rec.ts],
            "abs": repr(rec.abs_value),
            "pass": rec.passed,
        }, sort_keys=True))
        if worst is None or rec.abs_value > worst.abs_value:
            worst = rec
    series_rows = []
    if worst is not None:
        series = exp_sum_series(seqs, worst.ts, parse_schedule(str(n_max)), threads=threads)
        series_rows = [[n, v.real, v.imag, abs(v)]
                       for n, v in zip(series.schedule, series.values)]
    csv_text = _csv("N,re,im,abs", series_rows)
    expected = cfg.get("expect", "pass")
    outcome = "pass" if verdict_obj.overall else "fail"
    verdict = "pass" if outcome == expected else "fail"
    final = worst.abs_value if worst is not None else 0.0
    return RunReport(experiment="equidist", verdict=verdict, final_value=final,
                     tolerance=tol, seed=seed, config_echo=cfg.echo(),
                     csv_text=csv_text, extra_text="\n".join(records) + "\n",
                     note=f"{len(verdict_obj.records)} tuples, outcome={outcome}"
                          + (", sampled" if verdict_obj.sampled else ""))


def _run_weyl(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    t = cfg.get_float("t")
    if t is None:
        raise ConfigError(0, "weyl experiment needs key 't'")
    degree = cfg.get_int("degree", 1)
    n_max = cfg.get_int("n_max", 10**4)
    threshold = cfg.get_float("threshold", 0.25)
    q_max = cfg.get_int("q_max", 10**4)
    c_const = cfg.get_float("c_const", 10.0)
    det = weyl_detect(t, degree, n_max, threshold, q_max=q_max, c_const=c_const)
    if det is None:
        rows = []
        note = "no detection"
        final = 0.0
    else:
        rows = [[det.p, det.q, det.sum_abs, det.error]]
        note = f"detected {det.p}/{det.q}"
        final = det.sum_abs
    csv_text = _csv("p,q,sum_abs,error", rows)
    expected = cfg.get("expect", "any")
    outcome = "detect" if det is not None else "none"
    verdict = "pass" if expected in ("any", outcome) else "fail"
    return RunReport(experiment="weyl", verdict=verdict, final_value=final,
                     tolerance=threshold, seed=seed, config_echo=cfg.echo(),
                     csv_text=csv_text, note=note)


def _parse_indicator(raw: str, system):
    raw = raw.strip().lower()
    if raw == "whole":
        return Arc(0.0, 1.0) if not isinstance(system, Cyclic) \
            else CyclicSubset(tuple(range(system.order)))
    if raw == "empty":
        return Arc(0.0, 0.0) if not isinstance(system, Cyclic) else CyclicSubset(())
    if raw.startswith("arc:"):
        lo_s, hi_s = raw[4:].split(":")
        return Arc(float(lo_s), float(hi_s))
    if raw.startswith("box:"):
        intervals = []
        for part in raw[4:].split(","):
            lo_s, hi_s = part.split(":")
            intervals.append((float(lo_s), float(hi_s)))
        return Box(tuple(intervals))
    if raw.startswith("cyclic:"):
        return CyclicSubset(tuple(int(x) for x in raw[7:].split(",")))
    if raw.startswith("mask:"):
        return GridMask(tuple(c == "1" for c in raw[5:]))
    raise ValueError(f"unknown indicator {raw!r}")


def _run_recur(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    system = system_from_text(cfg.require("system"))
    seqs = [parse_sequence(s) for s in _split_list(cfg.require("seqs"))]
    indicator = _parse_indicator(cfg.require("indicator"), system)
    schedule = parse_schedule(cfg.require("schedule"))
    grid_m = cfg.get_int("m", 1 << 12)
    slack = cfg.get_float("slack", 0.02)
    modulus = cfg.get_int("r", None)
    if modulus is None:
        rep = recurrence_average(system, indicator, seqs, schedule, grid_m=grid_m)
    else:
        rep = recurrence_filtered(system, indicator, seqs, modulus, schedule,
                                  grid_m=grid_m)
    rows = [[n, a, rep.lower_bound, m]
            for n, a, m in zip(rep.schedule, rep.averages, rep.margins)]
    csv_text = _csv("N,average,bound,margin", rows)
    verdict = "pass" if rep.margins[-1] >= -slack else "fail"
    note = f"mu(A)={rep.mu_a}, quad_bound={rep.quadrature_bound}"
    if rep.filter_density is not None:
        note += f", filter_density={rep.filter_density}"
    return RunReport(experiment="recur", verdict=verdict,
                     final_value=rep.averages[-1], tolerance=slack, seed=seed,
                     config_echo=cfg.echo(), csv_text=csv_text, note=note)


def _run_flow(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    op = cfg.get("op", "diagnostic")
    tol = cfg.get_float("tol", 0.05)
    y_points = parse_y_schedule(cfg.require("y_schedule"))
    if op == "cv":
        profile = parse_profile(cfg.require("profile"))
        change = parse_time_change(cfg.require("change"))
        rep = change_of_variables_check(profile, change, y_points, tol=tol)
        rows = [[y, abs(d - c)] for y, d, c in zip(rep.y_points, rep.direct, rep.changed)]
        return RunReport(experiment="flow", verdict="pass" if rep.passed else "fail",
                         final_value=rep.final_difference, tolerance=tol, seed=seed,
                         config_echo=cfg.echo(), csv_text=_csv("y,diff", rows),
                         note="change-of-variables")
    flow = parse_flow_speeds(cfg.require("speeds"))
    if op == "stability":
        change = parse_time_change(cfg.require("change"))
        f = parse_observable(cfg.require("observable"), flow.dim)
        shift = cfg.get_float("shift", 1.0)
        x = tuple(float(v) for v in cfg.get("x", "0.3").split(","))
        rep = stability_check(flow, change, f, shift, x, y_points, tol=tol)
        rows = [[y, v] for y, v in zip(rep.y_points, rep.values)]
        return RunReport(experiment="flow", verdict="pass" if rep.passed else "fail",
                         final_value=rep.final_value, tolerance=tol, seed=seed,
                         config_echo=cfg.echo(), csv_text=_csv("y,diff", rows),
                         note="orbit stability")
    changes = [parse_time_change(c) for c in _split_list(cfg.require("changes"))]
    observables = [parse_observable(o, flow.dim)
                   for o in _split_list(cfg.require("observables"))]
    if op == "average":
        x = tuple(float(v) for v in cfg.get("x", "0.0").split(","))
        rep = flow_average(flow, changes, observables, x, y_points)
        rows = [[y, v.real, v.imag, abs(v)] for y, v in zip(rep.y_points, rep.values)]
        final = abs(rep.values[-1])
        return RunReport(experiment="flow", verdict="pass" if final <= tol else "fail",
                         final_value=final, tolerance=tol, seed=seed,
                         config_echo=cfg.echo(), csv_text=_csv("y,re,im,abs", rows),
                         note=f"quadrature error bound {rep.error_bound:.3e}")
    if op != "diagnostic":
        raise ConfigError(0, f"unknown flow op {op!r}")
    n_x = cfg.get_int("n_x", 16)
    x_seed = cfg.get_int("x_seed", seed)
    diag = joint_flow_diagnostic(flow, changes, observables, y_points, tol=tol,
                                 n_x=n_x, x_seed=x_seed)
    rows = [[y, d] for y, d in zip(diag.y_points, diag.max_deviation)]
    note = diag.hypothesis_note if diag.hypothesis_ok else \
        f"HYPOTHESIS WARNING: {diag.hypothesis_note}"
    return RunReport(experiment="flow", verdict="pass" if diag.passed else "fail",
                     final_value=diag.max_deviation[-1], tolerance=tol, seed=seed,
                     config_echo=cfg.echo(), csv_text=_csv("y,diff", rows), note=note)


def _run_vdc(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    count = cfg.get_int("count", 500)
    n = cfg.get_int("n", 256)
    dim_max = cfg.get_int("dim_max", 8)
    rng = counter_rng(seed)
    rows = []
    ok = True
    worst_gap = -math.inf
    # family 0: the exact-equality constant family
    const = np.zeros((n, 1), dtype=complex)
    const[:, 0] = 1.0
    lhs, rhs = vdc_bound(const)
    rows.append([0, lhs, rhs])
    ok &= lhs <= rhs + 1e-10 and abs(lhs - 1.0) < 1e-12 and abs(rhs - 1.0) < 1e-12
    for i in range(1, count):
        dim = int(rng.integers(1, dim_max + 1))
        size = int(rng.integers(8, n + 1))
        v = rng.normal(size=(size, dim)) + 1j * rng.normal(size=(size, dim))
        norms = np.sqrt(np.sum(np.abs(v) ** 2, axis=1))
        v /= np.maximum(norms, 1.0)[:, None]
        lhs, rhs = vdc_bound(v)
        rows.append([i, lhs, rhs])
        worst_gap = max(worst_gap, lhs - rhs)
        ok &= lhs <= rhs + 1e-10
    csv_text = _csv("family,lhs,rhs", rows)
    return RunReport(experiment="vdc", verdict="pass" if ok else "fail",
                     final_value=worst_gap, tolerance=1e-10, seed=seed,
                     config_echo=cfg.echo(), csv_text=csv_text,
                     note=f"{count} families, worst lhs-rhs gap {worst_gap:.3e}")


def _run_gcs(cfg: ExperimentConfig, threads: int, seed: int) -> RunReport:
    count = cfg.get_int("count", 100)
    s = cfg.get_int("s", 1)
    n = cfg.get_int("n", 48 if cfg.get_int("s", 1) == 1 else 12)
    system = system_from_text(cfg.get("system", "rotation 0.41421356237309515"))
    rng = counter_rng(seed)
    rows = []
    ok = True
    worst_gap = -math.inf
    import itertools
    for i in range(count):
        f_eps = {}
        for eps in itertools.product((0, 1), repeat=s):
            k = int(rng.integers(-3, 4))
            phase = float(rng.random())
            f_eps[eps] = Observable.monomial((k,) + (0,) * (system.dim - 1),
                                             complex(math.cos(2 * math.pi * phase),
                                                     math.sin(2 * math.pi * phase)))
        g_freq = int(rng.integers(-2, 3))

        def g_of(idx, g_freq=g_freq):
            return Observable.monomial((g_freq * (1 + idx[0] % 2),) + (0,) * (system.dim - 1))

        lhs, rhs = gcs_check(system, f_eps, g_of, n, s)
        gap = lhs ** (2 ** s) - rhs
        worst_gap = max(worst_gap, gap)
        ok &= gap <= 1e-8
        rows.append([i, lhs, rhs])
    csv_text = _csv("family,lhs,rhs", rows)
    return RunReport(experiment="gcs", verdict="pass" if ok else "fail",
                     final_value=worst_gap, tolerance=1e-8, seed=seed,
                     config_echo=cfg.echo(), csv_text=csv_text,
                     note=f"{count} monomial families at s={s}, N={n}")


_HANDLERS = {
    "average": _run_average,
    "seminorm": _run_seminorm,
    "equidist": _run_equidist,
    "weyl": _run_weyl,
    "recur": _run_recur,
    "flow": _run_flow,
    "vdc": _run_vdc,
    "gcs": _run_gcs,
}


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def _write_outputs(report: RunReport, out_dir: str, stem: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, f"{stem}.csv"), "w") as fh:
        fh.write(report.csv_text)
    with open(os.path.join(out_dir, f"{stem}.json"), "w") as fh:
        fh.write(report.summary_json())
    if report.extra_text is not None:
        with open(os.path.join(out_dir, f"{stem}.records.txt"), "w") as fh:
            fh.write(report.extra_text)


def run_config_file(path: str, out_dir: str | None, threads: int,
                    seed_override: int | None = None) -> RunReport:
    with open(path) as fh:
        cfg = parse_config(fh.read())
    report = run_experiment(cfg, threads=threads, seed_override=seed_override)
    if out_dir:
        stem = os.path.splitext(os.path.basename(path))[0]
        _write_outputs(report, out_dir, stem)
    return report


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ergolab",
                                     description="numeric experiments on explicit systems")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory for CSV/JSON")
    p_run.add_argument("--threads", type=int,
                       default=int(os.environ.get("ERGOLAB_THREADS", "1")))
    p_run.add_argument("--seed", type=int, default=None)
    p_batch = sub.add_parser("batch", help="run every config in a manifest")
    p_batch.add_argument("manifest")
    p_batch.add_argument("--out", default=None)
    p_batch.add_argument("--threads", type=int,
                         default=int(os.environ.get("ERGOLAB_THREADS", "1")))
    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            report = run_config_file(args.config, args.out, args.threads, args.seed)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"{report.experiment}: {report.verdict} "
              f"(final={report.final_value!r}, tol={report.tolerance!r}) {report.note}")
        return 0 if report.passed else 2

    # batch
    try:
        with open(args.manifest) as fh:
            paths = [ln.strip() for ln in fh if ln.strip() and not ln.strip().startswith("#")]
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    base = os.path.dirname(os.path.abspath(args.manifest))
    results = []
    any_error = False
    for rel in paths:
        path = rel if os.path.isabs(rel) else os.path.join(base, rel)
        try:
            rep = run_config_file(path, args.out, args.threads)
            results.append((rel, rep.verdict, rep.final_value))
            print(f"{rel}: {rep.verdict} (final={rep.final_value!r})")
        except Exception as exc:
            any_error = True
            results.append((rel, "error", float("nan")))
            print(f"{rel}: error: {exc}", file=sys.stderr)
    n_pass = sum(1 for _, v, _ in results if v == "pass")
    print(f"batch: {n_pass}/{len(results)} pass")
    if any_error:
        return 1
    return 0 if n_pass == len(results) else 2


if __name__ == "__main__":
    sys.exit(main())
