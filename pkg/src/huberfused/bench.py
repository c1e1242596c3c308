"""Experiment runner: simulation sweeps, tau grid search, coefficient profiles."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baseline import BaselineOptions, primal_admm_solve, prox_gradient_solve
from .dataset_io import load_csv, standardize
from .dual import RegressionProblem, SolverOptions, solve
from .metrics import classification_metrics, mae, mse, rlne
from .prox import HuberFusedConfig
from .simgen import SimulationSpec, gen_problem

__all__ = [
    "SOLVERS",
    "RESULT_COLUMNS",
    "TIMING_COLUMNS",
    "ExperimentConfig",
    "ExperimentOutput",
    "default_tau_grid",
    "default_positions",
    "fit",
    "tau_grid_search",
    "run_experiment",
    "run_experiment_full",
    "write_results",
    "emit_coefficient_profile",
]

SOLVERS = ("dual", "primal", "proxgrad")

RESULT_COLUMNS = (
    "repeat", "seed", "solver", "n", "p", "noise", "tau", "lambda1",
    "lambda2", "sigma", "rho", "tol", "max_iter", "converged", "iter",
    "rel_err", "rlne", "mae", "mse", "objective", "accuracy", "recall",
    "split", "error",
)
TIMING_COLUMNS = ("repeat", "seed", "solver", "time")


def default_tau_grid(n, p):
    """``{0.001, 0.01, 0.1, 0.5, 1}`` plus ``a * sqrt(n / log p)`` for
    ``a = 0.40, 0.45, ..., 1.50``."""
    scale = math.sqrt(n / math.log(p))
    return [0.001, 0.01, 0.1, 0.5, 1.0] + [
        (40 + 5 * i) / 100 * scale for i in range(23)]


def default_positions(p):
    """1-based coordinates ceil(p/10), ceil(3p/10), ceil(p/2), ceil(27p/40),
    ceil(7p/8)."""
    return [-(-a * p // b) for a, b in ((1, 10), (3, 10), (1, 2), (27, 40), (7, 8))]


def fit(problem, cfg, solver="dual", opts: SolverOptions | None = None,
        baseline_sigma=None):
    """Run one of the registered solvers with the same stopping rule.

    ``opts.sigma`` only applies to the dual solver; the primal baseline
    uses ``baseline_sigma`` (its own default when None).
    """
    opts = SolverOptions() if opts is None else opts
    if solver == "dual":
        return solve(problem, cfg, opts)
    base = BaselineOptions(tol=opts.tol, max_iter=opts.max_iter)
    if baseline_sigma is not None:
        base = replace(base, sigma=baseline_sigma)
    if solver == "primal":
        return primal_admm_solve(problem, cfg, base)
    if solver == "proxgrad":
        return prox_gradient_solve(problem, cfg, base)
    raise ValueError(f"unknown solver {solver!r}; expected one of {SOLVERS}")


def _metric(name, problem, beta, beta_star):
    if name == "mae":
        return mae(problem, beta)
    if name == "mse":
        return mse(problem, beta)
    if name == "rlne":
        if beta_star is None:
            raise ValueError("grid metric 'rlne' needs the true coefficients")
        return rlne(beta, beta_star)
    raise ValueError(f"unknown grid metric {name!r}")


def tau_grid_search(problem, cfg_base, opts=None, grid=None, metric="mae",
                    solver="dual", beta_star=None, baseline_sigma=None):
    """Fit once per candidate ``tau`` and keep the one with the best metric.

    Ties go to the smaller ``tau``; candidates whose fit raised are
    recorded with their error and skipped.

    Returns
    -------
    best_tau : float
    rows : list of dict
        One entry per candidate with keys ``tau``, ``score``, ``fit`` and
        ``error``.
    """
    if grid is None:
        grid = default_tau_grid(problem.n, problem.p)
    grid = list(grid)
    if not grid:
        raise ValueError("tau grid is empty")
    rows = []
    for tau in grid:
        try:
            cfg = HuberFusedConfig(tau, cfg_base.lambda1, cfg_base.lambda2)
            res = fit(problem, cfg, solver, opts, baseline_sigma)
            score = _metric(metric, problem, res.beta_hat, beta_star)
            rows.append({"tau": tau, "score": score, "fit": res, "error": ""})
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            rows.append({"tau": tau, "score": math.nan, "fit": None,
                         "error": f"{type(exc).__name__}: {exc}"})
    ok = [r for r in rows if not r["error"] and math.isfinite(r["score"])]
    if not ok:
        raise RuntimeError("every tau in the grid failed")
    best = min(ok, key=lambda r: (r["score"], r["tau"]))
    return best["tau"], rows


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to replay one experiment.

    ``mode`` is ``"simulate"`` (uses ``spec``) or ``"fit-csv"`` (uses
    ``data_path``).  Repeat ``i`` of a simulation uses seed
    ``spec.seed + i``; in fit-csv mode the seed only drives the optional
    holdout split.
    """

    mode: str = "simulate"
    spec: SimulationSpec | None = None
    data_path: str | None = None
    response_col: int = 0
    has_header: bool = False
    transpose: bool = False
    standardize: bool = False
    cfg: HuberFusedConfig = field(default_factory=HuberFusedConfig)
    opts: SolverOptions = field(default_factory=SolverOptions)
    solvers: tuple = ("dual",)
    tau_grid: tuple | None = None
    grid_metric: str = "mae"
    repeats: int = 1
    seed: int = 0
    threshold: float = 0.5
    holdout: float = 0.0
    workers: int = 1
    baseline_sigma: float | None = None

    def __post_init__(self):
        if self.mode not in ("simulate", "fit-csv"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "simulate" and (self.spec is None or self.data_path is not None):
            raise ValueError("simulate mode needs a SimulationSpec and no data path")
        if self.mode == "fit-csv" and (self.data_path is None or self.spec is not None):
            raise ValueError("fit-csv mode needs a data path and no SimulationSpec")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        for s in self.solvers:
            if s not in SOLVERS:
                raise ValueError(f"unknown solver {s!r}")
        if not 0.0 <= self.holdout < 1.0:
            raise ValueError("holdout fraction must lie in [0, 1)")


def _split(n, frac, seed):
    if frac == 0.0:
        return np.arange(n), None
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    n_test = max(1, int(round(frac * n)))
    if n_test >= n:
        raise ValueError("holdout leaves no training samples")
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def _repeat_inputs(config: ExperimentConfig, i):
    if config.mode == "simulate":
        seed = config.spec.seed + i
        problem, truth = gen_problem(replace(config.spec, seed=seed))
        return seed, problem, truth.beta_star, None, config.spec.noise.kind
    seed = config.seed + i
    data = load_csv(config.data_path, config.has_header, config.response_col,
                    config.transpose)
    if config.standardize:
        data = standardize(data)
    train, test = _split(data.n, config.holdout, seed)
    problem = RegressionProblem(data.features[train], data.response[train])
    held = None
    if test is not None:
        held = RegressionProblem(data.features[test], data.response[test])
    return seed, problem, None, held, ""


def _solver_sigma(solver, config):
    if solver == "dual":
        return config.opts.sigma
    if solver == "primal":
        return (BaselineOptions().sigma if config.baseline_sigma is None
                else config.baseline_sigma)
    return ""


def _run_repeat(args):
    config, i = args
    seed, problem, beta_star, held, noise = _repeat_inputs(config, i)
    rows, timings, fits = [], [], []
    for solver in config.solvers:
        cfg = config.cfg
        error = ""
        res = None
        try:
            if config.tau_grid is not None:
                grid = list(config.tau_grid) or None
                tau, cand = tau_grid_search(problem, cfg, config.opts, grid,
                                            config.grid_metric, solver, beta_star,
                                            config.baseline_sigma)
                cfg = HuberFusedConfig(tau, cfg.lambda1, cfg.lambda2)
                res = next(r["fit"] for r in cand if r["tau"] == tau and r["fit"] is not None)
            else:
                res = fit(problem, cfg, solver, config.opts, config.baseline_sigma)
        except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
            error = f"{type(exc).__name__}: {exc}"
        row = {
            "repeat": i, "seed": seed, "solver": solver, "n": problem.n,
            "p": problem.p, "noise": noise, "tau": cfg.tau,
            "lambda1": cfg.lambda1, "lambda2": cfg.lambda2,
            "sigma": _solver_sigma(solver, config),
            "rho": config.opts.rho if solver == "dual" else "",
            "tol": config.opts.tol, "max_iter": config.opts.max_iter,
            "converged": False, "iter": "", "rel_err": "", "rlne": "",
            "mae": "", "mse": "", "objective": "", "accuracy": "",
            "recall": "", "split": "", "error": error,
        }
        if res is not None:
            row.update(converged=res.converged, iter=res.iterations,
                       rel_err=res.rel_err_final, objective=res.primal_objective)
            if beta_star is not None:
                row["rlne"] = rlne(res.beta_hat, beta_star)
            evalp = held if held is not None else problem
            row["split"] = "holdout" if held is not None else "in-sample"
            row["mae"] = mae(evalp, res.beta_hat)
            row["mse"] = mse(evalp, res.beta_hat)
            if config.mode == "fit-csv":
                labels = evalp.y
                if np.all(np.isin(labels, (0.0, 1.0))):
                    acc, rec = classification_metrics(
                        labels.astype(int), evalp.X @ res.beta_hat, config.threshold)
                    row["accuracy"], row["recall"] = acc, rec
            timings.append({"repeat": i, "seed": seed, "solver": solver,
                            "time": res.wall_time})
        rows.append(row)
        fits.append(res)
    return rows, timings, fits


@dataclass
class ExperimentOutput:
    rows: list
    timings: list
    fits: list


def run_experiment_full(config: ExperimentConfig) -> ExperimentOutput:
    """Like :func:`run_experiment` but also return timings and fits.

    ``fits`` is aligned with ``rows``; entries are ``None`` for failed fits.
    """
    jobs = [(config, i) for i in range(config.repeats)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            parts = list(ex.map(_run_repeat, jobs))
    else:
        parts = [_run_repeat(job) for job in jobs]
    return ExperimentOutput(
        rows=[r for part in parts for r in part[0]],
        timings=[t for part in parts for t in part[1]],
        fits=[f for part in parts for f in part[2]],
    )


def run_experiment(config: ExperimentConfig):
    """Run every (repeat, solver) pair and return the result rows in order.

    Rows follow :data:`RESULT_COLUMNS` and depend only on ``config``, so
    the table is reproducible byte for byte.  Wall-clock times live in a
    separate table (:data:`TIMING_COLUMNS`), see :func:`run_experiment_full`.
    """
    return run_experiment_full(config).rows


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_results(rows, fh, columns=RESULT_COLUMNS):
    """Write ``rows`` as CSV with a fixed header and column order."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])


def emit_coefficient_profile(fit_result, positions=None, full=False):
    """CSV text with one ``index,coefficient`` row per requested position.

    Positions are 1-based.  By default the five box-plot positions from
    :func:`default_positions` are used; ``full=True`` emits every
    coefficient.
    """
    beta = np.asarray(fit_result.beta_hat)
    p = beta.size
    if full:
        idx = list(range(1, p + 1))
    else:
        idx = default_positions(p) if positions is None else [int(i) for i in positions]
        for i in idx:
            if not 1 <= i <= p:
                raise ValueError(f"position {i} outside 1..{p}")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("index", "coefficient"))
    for i in idx:
        writer.writerow((i, repr(float(beta[i - 1]))))
    return out.getvalue()
