"""Command-line scenario runner.

    contchoquet run <config> [--out DIR] [--seed INT] [--jobs INT]
    contchoquet describe <config> [--seed INT]

Exit codes: 0 every stage passed, 1 a verification failed, 2 the
configuration or a domain precondition is invalid.
"""
import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, load_scenario
from .exceptions import CoverError, DomainError, InputError, RefinementError
from .measures import TestFunctionFamily, barycenter
from .parametric import (continuity_audit, evaluate, lsc_ext_audit,
                         track_extreme_point)
from .selection import (build_cover, continuous_selection,
                        michael_epsilon_selection, partition_of_unity,
                        selection_audit, verify_delta_selection)

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _f(x):
    return f"{x:.17g}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_f(v) if isinstance(v, (float, np.floating)) else v
                        for v in row])


def _flag(v):
    return "informational" if v is None else ("pass" if v else "fail")


def describe(scenario, stream=None):
    """Print the resolved plan, defaults included."""
    stream = sys.stdout if stream is None else stream
    section = None
    print(f"# scenario {scenario.name} ({scenario.source})", file=stream)
    for sec, key, value in scenario.resolved():
        if sec != section:
            print(f"\n[{sec}]", file=stream)
            section = sec
        print(f"{key} = {value}", file=stream)
    print(f"\n# weak* series truncated at N={scenario.N}: omitted tail "
          f"<= 2^(1-N) = {2.0 ** (1 - scenario.N):.3g}", file=stream)
    if scenario.lipschitz is not None:
        print(f"# declared Lipschitz bound {scenario.lipschitz:.6g}",
              file=stream)


def _write_summary(path, scenario, results):
    lines = []
    section = None
    for sec, key, value in scenario.resolved():
        if sec != section:
            lines.append(f"\n[{sec}]" if lines else f"[{sec}]")
            section = sec
        lines.append(f"{key} = {value}")
    lines.append("\n[stages]")
    for stage in scenario.stages:
        status, note = results.get(stage, ("skipped", ""))
        lines.append(f"{stage} = {status}" + (f"  # {note}" if note else ""))
    Path(path).write_text("\n".join(lines) + "\n")


def run(scenario, out, jobs=1, log=None):
    """Execute the scenario stages, write CSVs and ``summary.ini``.

    Returns the exit code.
    """
    log = sys.stderr if log is None else log
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    F = scenario.family
    lo, hi = scenario.domain
    d = F.dim
    audit = np.linspace(lo, hi, scenario.audit_points)
    cover_grid = np.linspace(lo, hi, scenario.cover_points)
    fam = TestFunctionFamily(scenario.seed, d, scenario.family_size)
    p = continuous_selection(F, scenario.x_ref)
    coords = [f"x{k + 1}" for k in range(d)]
    results = {}
    cover = None

    def record(stage, ok, note=""):
        results[stage] = ("pass" if ok else "fail", note)
        print(f"{stage}: {'pass' if ok else 'FAIL'} {note}".rstrip(), file=log)

    for stage in scenario.stages:
        if stage == "continuity_audit":
            rep = continuity_audit(F, audit, scenario.continuity_tol)
            _write_csv(out / "continuity_audit.csv",
                       ["t_left", "t_right", "hausdorff", "modulus", "status"],
                       [(r.t_left, r.t_right, r.hausdorff, r.modulus,
                         _flag(r.passed)) for r in rep.rows])
            if rep.passed is None:
                results[stage] = ("informational",
                                  f"max modulus {rep.max_modulus:.6g}")
            else:
                record(stage, rep.passed, f"max modulus {rep.max_modulus:.6g}")
        elif stage == "lsc_ext_audit":
            rep = lsc_ext_audit(F, audit, scenario.lsc_tol_slope)
            _write_csv(out / "lsc_ext_audit.csv",
                       ["t_left", "t_right", "max_vertex_shift", "bound",
                        "status"] + [f"worst_{c}" for c in coords],
                       [(r.t_left, r.t_right, r.max_shift, r.bound,
                         _flag(r.passed), *r.worst_vertex) for r in rep.rows])
            note = ""
            if rep.failures:
                bad = rep.failures[0]
                note = (f"{len(rep.failures)} failing pair(s), first at "
                        f"[{bad.t_left:.6g}, {bad.t_right:.6g}]")
            record(stage, rep.passed, note)
        elif stage == "track":
            P0 = evaluate(F, lo)
            e0 = (scenario.track_vertex if scenario.track_vertex is not None
                  else P0.vertices[-1])
            n = np.arange(1, scenario.track_points + 1)
            ts = lo + (hi - lo) / n
            tr = track_extreme_point(F, lo, e0, ts)
            dist = np.linalg.norm(tr.points - e0, axis=1)
            lip = scenario.lipschitz
            rows = []
            ok = True
            for k, t in enumerate(ts):
                is_vertex = bool(np.any(np.all(
                    evaluate(F, t).vertices == tr.points[k], axis=1)))
                ok &= is_vertex and tr.slice_gaps[k] <= 1e-12
                within = ("n/a" if lip is None else
                          _flag(dist[k] <= lip * abs(t - lo) + 1e-12))
                rows.append((int(n[k]), t, *tr.points[k], dist[k],
                             tr.slice_gaps[k], within))
            _write_csv(out / "track.csv",
                       ["n", "t"] + coords + ["distance_to_e0", "slice_gap",
                                              "lipschitz_bound"], rows)
            record(stage, ok, f"margin {tr.margin:.6g}")
        elif stage == "select":
            rows_s = selection_audit(F, p, audit)
            ok_cont = all(r.passed for r in rows_s)
            try:
                sel = michael_epsilon_selection(F, scenario.eps, cover_grid)
                ok_eps = sel.passed
                eps_rows = [(t, *sel(t), dist) for t, dist in
                            zip(sel.audit_ts, sel.audit_distances)]
            except RefinementError as exc:
                ok_eps, eps_rows = False, []
                print(f"select: {exc}", file=log)
            _write_csv(out / "select_continuous.csv",
                       ["t_left", "t_right", "step", "stability_bound",
                        "membership_gap", "status"],
                       [(r.t_left, r.t_right, r.step, r.bound,
                         r.membership_gap, _flag(r.passed)) for r in rows_s])
            _write_csv(out / "select_epsilon.csv",
                       ["t"] + coords + ["distance_to_set"], eps_rows)
            record(stage, ok_cont and ok_eps,
                   f"continuous {_flag(ok_cont)}, eps {_flag(ok_eps)}")
        elif stage == "build_cover":
            try:
                cover = build_cover(F, p, scenario.gamma, scenario.delta, fam,
                                    scenario.N, cover_grid, scenario.ext_tol)
            except CoverError as exc:
                record(stage, False, f"{exc} (worst t {exc.worst_t:.9g})")
                continue
            rows = []
            for k, c in enumerate(cover.charts):
                rows.append((k, c.center, c.radius, len(c.witness),
                             *barycenter(c.witness)))
            _write_csv(out / "cover.csv",
                       ["chart", "center", "radius", "atoms"]
                       + [f"barycenter_{c}" for c in coords], rows)
            record(stage, True, f"{len(cover.charts)} charts, "
                                f"{cover.refinements} refinement(s)")
        elif stage == "verify_delta_selection":
            if cover is None:
                results[stage] = ("skipped", "no cover")
                continue
            pou = partition_of_unity(cover)
            rep = verify_delta_selection(F, p, cover, pou, scenario.gamma,
                                         scenario.delta, fam, scenario.N,
                                         audit, scenario.ext_tol, jobs)
            rows = []
            for r in rep.rows:
                weights = ";".join(f"{a}:{_f(w)}"
                                   for a, w in sorted(r.chart_weights.items()))
                rows.append((r.t, weights, r.distance, r.barycenter_gap,
                             _flag(r.passed)))
            _write_csv(out / "verify_delta_selection.csv",
                       ["t", "chart_weights", "weak_star_distance",
                        "barycenter_gap", "status"], rows)
            record(stage, rep.passed,
                   f"max distance {rep.max_distance:.6g}, "
                   f"weak* modulus {rep.modulus:.6g}")
    _write_summary(out / "summary.ini", scenario, results)
    failed = any(status == "fail" for status, _ in results.values())
    return EXIT_FAILED if failed else EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="contchoquet",
        description="Run continuity/selection scenarios on parametric polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a scenario")
    p_desc = sub.add_parser("describe", help="print the resolved plan")
    for p in (p_run, p_desc):
        p.add_argument("config", help="scenario file or bundled scenario name")
        p.add_argument("--seed", type=int, default=None,
                       help="override the test-function seed")
    p_run.add_argument("--out", default=None,
                       help="output directory (default: ./<name>-out)")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="threads for per-point verification")
    args = parser.parse_args(argv)
    try:
        scenario = load_scenario(args.config, seed=args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "describe":
        describe(scenario)
        return EXIT_OK
    out = args.out or f"{scenario.name}-out"
    try:
        return run(scenario, out, jobs=max(1, args.jobs))
    except (DomainError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
