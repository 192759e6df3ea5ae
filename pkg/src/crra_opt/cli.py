"""Command-line front door.

Subcommands
-----------
estimate   price CSV -> validated params JSON (moments of excess returns)
solve      params JSON + gamma -> solver report JSON (one method or all)
compare    full simulation study: long-form CSV, ECDF files, nested JSON
frontier   gamma sweep of closed-form mean/variance plus the tangency row

Exit codes: 0 success, 2 I/O error, 3 validation error, 4 risk aversion
below the admissibility bound (the bound is printed), 5 solver did not
converge.  Identical invocations over identical files produce byte-identical
outputs.  Seeds are required for every stochastic command.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .closed_form import solve_analytical, tangency
from .errors import (
    GammaBelowBound,
    NotConverged,
    StepIntoInfeasible,
    ValidationError,
)
from .gradient import GdConfig, gd_solve, suggest_eta
from .market import (
    RiskAversion,
    estimate_params,
    gamma_lower_bound,
    read_params_json,
    read_price_csv,
    write_params_json,
)
from .reports import (
    analytical_report_dict,
    comparison_report_dict,
    dumps_json,
    fmt_gamma,
    gd_report_dict,
    human_comparison_table,
    taylor_report_dict,
    write_comparison_csv,
    write_ecdf_files,
    write_text,
)
from .simulation import compare, simulate
from .taylor import TaylorConfig, taylor_solve

EXIT_OK = 0
EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_GAMMA_BOUND = 4
EXIT_NOT_CONVERGED = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crra-opt",
        description="Single-period power-utility portfolio solvers and the "
                    "simulation study comparing them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate excess-return moments from a price CSV")
    est.add_argument("--prices", required=True, type=Path,
                     help="price CSV with header date,<name1>,...,<namek>")
    est.add_argument("--rf", required=True, type=float,
                     help="per-period net risk-free rate")
    est.add_argument("--out", required=True, type=Path, help="params JSON output path")
    est.set_defaults(func=cmd_estimate)

    slv = sub.add_parser("solve", help="solve for optimal weights at one gamma")
    slv.add_argument("--params", required=True, type=Path, help="params JSON path")
    slv.add_argument("--gamma", required=True, type=float, help="relative risk aversion")
    slv.add_argument("--method", choices=("analytical", "gd", "taylor", "all"),
                     default="analytical", help="solver to run (default: analytical)")
    slv.add_argument("--samples", type=int, default=None,
                     help="scenario count for gd/taylor (required for those methods)")
    slv.add_argument("--seed", type=int, default=None,
                     help="scenario seed for gd/taylor (required for those methods)")
    _add_solver_flags(slv)
    slv.add_argument("--out", type=Path, default=None,
                     help="report JSON path (default: print to stdout)")
    slv.set_defaults(func=cmd_solve)

    cmp_ = sub.add_parser("compare", help="run the full three-method comparison study")
    cmp_.add_argument("--params", required=True, type=Path, help="params JSON path")
    cmp_.add_argument("--gammas", required=True,
                      help="comma-separated risk aversions, e.g. 5,10,15,20")
    cmp_.add_argument("--samples", required=True, type=int, help="scenario count N")
    cmp_.add_argument("--seed", required=True, type=int, help="scenario seed")
    _add_solver_flags(cmp_)
    cmp_.add_argument("--ecdf-points", type=int, default=256,
                      help="grid points per ECDF table (default: 256)")
    cmp_.add_argument("--outdir", required=True, type=Path,
                      help="directory for comparison.csv, comparison.json and ECDF files")
    cmp_.set_defaults(func=cmd_compare)

    fro = sub.add_parser("frontier", help="sweep closed-form mean/variance over gamma")
    fro.add_argument("--params", required=True, type=Path, help="params JSON path")
    fro.add_argument("--gamma-from", required=True, type=float, help="sweep start")
    fro.add_argument("--gamma-to", required=True, type=float, help="sweep end")
    fro.add_argument("--steps", type=int, default=50, help="grid size (default: 50)")
    fro.add_argument("--out", required=True, type=Path, help="frontier CSV path")
    fro.set_defaults(func=cmd_frontier)
    return parser


def _add_solver_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--eta", type=float, default=None,
                     help="gd learning rate (default: auto, matched to sampled curvature)")
    cmd.add_argument("--tol", type=float, default=1e-8,
                     help="gd gradient-norm stopping threshold (default: 1e-8)")
    cmd.add_argument("--max-iter", type=int, default=100_000,
                     help="gd iteration cap (default: 100000)")
    cmd.add_argument("--taylor-tol", type=float, default=1e-10,
                     help="fixed-point step threshold (default: 1e-10)")
    cmd.add_argument("--taylor-max-iter", type=int, default=1000,
                     help="fixed-point iteration cap (default: 1000)")


def cmd_estimate(args) -> int:
    series = read_price_csv(args.prices)
    params = estimate_params(series, args.rf)
    write_params_json(params, args.out)
    bound = gamma_lower_bound(params)
    print(f"assets k = {params.k}")
    print(f"observations T = {series.t}")
    print("mu = " + " ".join(f"{x:.6g}" for x in params.mu))
    print("diag(sigma) = " + " ".join(f"{x:.6g}" for x in np.diag(params.sigma)))
    print(f"gamma lower bound 1+4J = {bound:.6g}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _gd_config(args, scenarios, ra) -> GdConfig:
    eta = args.eta if args.eta is not None else suggest_eta(scenarios, ra)
    return GdConfig(eta=eta, tol=args.tol, max_iter=args.max_iter)


def cmd_solve(args) -> int:
    params = read_params_json(args.params)
    ra = RiskAversion(args.gamma)
    needs_scenarios = args.method in ("gd", "taylor", "all")
    if needs_scenarios and (args.samples is None or args.seed is None):
        raise ValidationError(f"--method {args.method} requires --samples and --seed")

    scenarios = simulate(params, args.samples, args.seed) if needs_scenarios else None
    reports: dict[str, dict] = {}
    if args.method in ("analytical", "all"):
        reports["analytical"] = analytical_report_dict(solve_analytical(params, ra))
    if args.method in ("taylor", "all"):
        tcfg = TaylorConfig(tol=args.taylor_tol, max_iter=args.taylor_max_iter)
        reports["taylor"] = taylor_report_dict(
            taylor_solve(scenarios, ra, params.gross_rf, tcfg)
        )
    if args.method in ("gd", "all"):
        cfg = _gd_config(args, scenarios, ra)
        reports["gd"] = gd_report_dict(gd_solve(scenarios, ra, params.gross_rf, cfg))

    if args.method == "all":
        names = list(reports)
        distances = {}
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                wa = np.asarray(reports[a]["weights"])
                wb = np.asarray(reports[b]["weights"])
                distances[f"{a}_{b}"] = float(np.max(np.abs(wa - wb)))
        payload: dict = dict(reports)
        payload["weight_distance_inf"] = distances
        text = dumps_json(payload)
    else:
        text = dumps_json(reports[args.method])

    if args.out is not None:
        write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args) -> int:
    params = read_params_json(args.params)
    try:
        gammas = [float(tok) for tok in args.gammas.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"--gammas must be comma-separated numbers, got {args.gammas!r}")
    if not gammas:
        raise ValidationError("--gammas must name at least one value")
    gd_cfg = None
    if args.eta is not None:
        gd_cfg = GdConfig(eta=args.eta, tol=args.tol, max_iter=args.max_iter)
    taylor_cfg = TaylorConfig(tol=args.taylor_tol, max_iter=args.taylor_max_iter)
    report = compare(
        params, gammas, n=args.samples, seed=args.seed,
        gd_cfg=gd_cfg, taylor_cfg=taylor_cfg, ecdf_points=args.ecdf_points,
    )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_comparison_csv(report, outdir / "comparison.csv")
    write_text(outdir / "comparison.json", dumps_json(comparison_report_dict(report)))
    write_ecdf_files(report, outdir)
    print(human_comparison_table(report))
    failed = [key for key, cell in report.cells.items() if cell.failed]
    if failed and len(failed) == len(report.cells):
        print("every cell failed", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    for g, method in failed:
        print(f"cell gamma={fmt_gamma(g)} method={method} failed: "
              f"{report.cells[(g, method)].error}", file=sys.stderr)
    print(f"wrote {outdir / 'comparison.csv'}")
    print(f"wrote {outdir / 'comparison.json'}")
    print(f"wrote {len(report.ecdfs)} ECDF files to {outdir}")
    return EXIT_OK


def cmd_frontier(args) -> int:
    params = read_params_json(args.params)
    bound = gamma_lower_bound(params)
    if args.gamma_from < bound - 1e-12:
        raise GammaBelowBound(args.gamma_from, bound)
    if args.gamma_to < args.gamma_from:
        raise ValidationError("--gamma-to must be >= --gamma-from")
    if args.steps < 1:
        raise ValidationError(f"--steps must be >= 1, got {args.steps}")
    grid = np.linspace(args.gamma_from, args.gamma_to, args.steps)
    lines = ["gamma,mean_excess,variance,tangency"]
    for g in grid:
        g = float(g)
        sol = solve_analytical(params, RiskAversion(g))
        lines.append(f"{g!r},{sol.expected_excess_return!r},{sol.variance!r},false")
    tgc = tangency(params)
    mean = float(tgc.weights @ params.mu)
    variance = float(tgc.weights @ params.sigma @ tgc.weights)
    lines.append(f"{tgc.gamma_tgc!r},{mean!r},{variance!r},true")
    write_text(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GammaBelowBound as exc:
        print(f"error: {exc} (bound = {exc.bound:.6f})", file=sys.stderr)
        return EXIT_GAMMA_BOUND
    except (NotConverged, StepIntoInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
