"""Command-line experiment runner.

Example::

    huberfused --mode simulate --n 200 --p 500 --noise t --repeats 10 \\
        --solver dual primal --tau-grid default --output results.csv
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from .dual import SolverOptions
from .prox import HuberFusedConfig
from .simgen import NoiseSpec, SimulationSpec

EPILOG = (
    "Output CSV columns, in order: " + ", ".join(bench.RESULT_COLUMNS) + ". "
    "Empty cells mean not applicable.  'converged' is 1/0.  The table depends "
    "only on the arguments; wall-clock times go to --timing-output with "
    "columns " + ", ".join(bench.TIMING_COLUMNS) + ".  Coefficient profiles "
    "(--profile-output) have columns index (1-based), coefficient.  Exit "
    "status is 0 iff every requested fit converged."
)


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _positions(text):
    if text in ("default", "all"):
        return text
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser():
    ap = argparse.ArgumentParser(
        prog="huberfused",
        description="Huber fused-lasso regression experiments.",
        epilog=EPILOG,
    )
    ap.add_argument("--mode", choices=("simulate", "fit-csv"), default="simulate")
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--p", type=int, default=500)
    ap.add_argument("--noise", choices=("gaussian", "t", "lognormal", "laplace"),
                    default="gaussian")
    ap.add_argument("--center-lognormal", action="store_true",
                    help="subtract the analytic mean of lognormal noise")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=1)
    ap.add_argument("--tau", type=float, default=0.5)
    ap.add_argument("--tau-grid", default=None, metavar="LIST|default",
                    help="comma-separated candidates, or 'default' for the "
                         "standard 28-point grid")
    ap.add_argument("--grid-metric", choices=("mae", "mse", "rlne"), default="mae")
    ap.add_argument("--lambda1", type=float, default=0.01)
    ap.add_argument("--lambda2", type=float, default=0.01)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--baseline-sigma", type=float, default=None,
                    help="ADMM penalty of the primal baseline (default 0.05)")
    ap.add_argument("--rho", type=float, default=1.618)
    ap.add_argument("--tol", type=float, default=1e-3)
    ap.add_argument("--max-iter", type=int, default=5000)
    ap.add_argument("--solver", nargs="+", choices=bench.SOLVERS, default=["dual"],
                    help="one or more solvers; 'primal' and 'proxgrad' are the "
                         "reference baselines")
    ap.add_argument("--data", metavar="PATH", help="CSV file for fit-csv mode")
    ap.add_argument("--response-col", type=int, default=0)
    ap.add_argument("--header", action="store_true", help="CSV has a header row")
    ap.add_argument("--transpose", action="store_true",
                    help="CSV stores features as rows and samples as columns")
    ap.add_argument("--standardize", action="store_true")
    ap.add_argument("--threshold", type=float, default=0.5,
                    help="classification cut-off for 0/1 responses")
    ap.add_argument("--holdout", type=float, default=0.0,
                    help="fraction of samples held out for evaluation (fit-csv)")
    ap.add_argument("--positions", type=_positions, default="default",
                    help="coefficient positions for --profile-output: "
                         "comma-separated 1-based indices, 'default' or 'all'")
    ap.add_argument("--profile-output", metavar="PATH",
                    help="write the coefficient profile of the first fit")
    ap.add_argument("--timing-output", metavar="PATH")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", metavar="PATH", default="-",
                    help="results CSV ('-' for standard output)")
    return ap


def config_from_args(args) -> bench.ExperimentConfig:
    if args.tau_grid is None:
        grid = None
    elif args.tau_grid == "default":
        grid = ()
    else:
        grid = tuple(_floats(args.tau_grid))
        if not grid:
            raise ValueError("--tau-grid is empty")
    spec = None
    if args.mode == "simulate":
        spec = SimulationSpec(args.n, args.p,
                              NoiseSpec(args.noise, centered=args.center_lognormal),
                              seed=args.seed)
    elif args.data is None:
        raise ValueError("--mode fit-csv requires --data")
    return bench.ExperimentConfig(
        mode=args.mode,
        spec=spec,
        data_path=args.data if args.mode == "fit-csv" else None,
        response_col=args.response_col,
        has_header=args.header,
        transpose=args.transpose,
        standardize=args.standardize,
        cfg=HuberFusedConfig(args.tau, args.lambda1, args.lambda2),
        opts=SolverOptions(sigma=args.sigma, rho=args.rho, tol=args.tol,
                           max_iter=args.max_iter),
        solvers=tuple(args.solver),
        tau_grid=grid,
        grid_metric=args.grid_metric,
        repeats=args.repeats,
        seed=args.seed,
        threshold=args.threshold,
        holdout=args.holdout,
        workers=args.workers,
        baseline_sigma=args.baseline_sigma,
    )


def _open(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        ap.error(str(exc))

    out = bench.run_experiment_full(config)

    fh, close = _open(args.output)
    try:
        bench.write_results(out.rows, fh)
    finally:
        if close:
            fh.close()
    if args.timing_output:
        with open(args.timing_output, "w", newline="", encoding="utf-8") as fh:
            bench.write_results(out.timings, fh, bench.TIMING_COLUMNS)
    if args.profile_output:
        first = next((f for f in out.fits if f is not None), None)
        if first is None:
            print("no successful fit to profile", file=sys.stderr)
        else:
            text = bench.emit_coefficient_profile(
                first,
                positions=None if args.positions in ("default", "all") else args.positions,
                full=args.positions == "all")
            with open(args.profile_output, "w", encoding="utf-8") as fh:
                fh.write(text)

    failed = [r for r in out.rows if not r["converged"]]
    if failed:
        print(f"{len(failed)} of {len(out.rows)} fits did not converge:", file=sys.stderr)
        for r in failed:
            reason = r["error"] or f"max_iter reached, rel_err={r['rel_err']}"
            print(f"  repeat {r['repeat']} seed {r['seed']} solver {r['solver']}: {reason}",
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
