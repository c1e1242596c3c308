"""Semi-proximal ADMM on the dual of the Huber fused-lasso problem.

The primal problem is::

    minimize_beta  (1/n) sum_i h_tau(y_i - x_i^T beta) + lambda1 ||beta||_1
                   + lambda2 ||D beta||_1

Its dual, after splitting ``v = X^T u``, reads::

    minimize_{u, v}  H*(u) + p*(v) - <u, y>   s.t.  v = X^T u

with ``H*(u) = (n/2) ||u||^2`` on the box ``||u||_inf <= tau/n``.  Adding
the proximal term ``S = (eta - n) I - sigma X X^T`` to the u-subproblem
turns it into a box projection; the v-subproblem is a fused-lasso prox via
Moreau's identity.  The multiplier ``w`` of the constraint converges to
the primal solution ``beta``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import spectral_norm_sq
from .prox import (
    HuberFusedConfig,
    empirical_huber,
    fused_penalty_value,
    fused_prox,
    in_fused_dual_domain,
)

__all__ = [
    "RegressionProblem",
    "SolverOptions",
    "SolverState",
    "FitResult",
    "DualInfeasibleError",
    "estimate_eta",
    "dual_u_step",
    "dual_v_step",
    "dual_w_step",
    "solve",
    "primal_objective",
    "dual_objective",
    "feasible_dual_objective",
    "rel_err",
]

GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0


class DualInfeasibleError(ValueError):
    """Raised when a dual point lies outside the box ``||u||_inf <= tau/n``."""


@dataclass(frozen=True)
class RegressionProblem:
    """Design matrix ``X`` (n x p) and response ``y`` (n,)."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"X must be a nonempty 2-d array, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise ValueError(
                f"y has {y.shape[0]} entries but X has {X.shape[0]} rows")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite entries")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class SolverOptions:
    """Algorithm parameters of the dual spADMM.

    Attributes
    ----------
    sigma : float
        Penalty parameter of the augmented Lagrangian.
    rho : float
        Dual step length, strictly inside ``(0, (1 + sqrt(5)) / 2)``.
    eta_margin : float
        Extra amount added to ``eta`` on top of the spectral bound.
    tol : float
        Stop once ``RelErr`` of the coefficient sequence drops below this.
    max_iter : int
    spectral_tol : float
        Relative tolerance of the power iteration that bounds ``||X||_2``.
    adaptive_sigma : bool
        Opt-in residual balancing of ``sigma``.  Off by default: the
        convergence guarantee is for a fixed ``sigma``.
    """

    sigma: float = 1.0
    rho: float = 1.618
    eta_margin: float = 0.0
    tol: float = 1e-6
    max_iter: int = 5000
    spectral_tol: float = 1e-6
    adaptive_sigma: bool = False

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.rho < GOLDEN:
            raise ValueError(f"rho must lie in (0, {GOLDEN:.6f}), got {self.rho}")
        if not self.eta_margin >= 0:
            raise ValueError("eta_margin must be nonnegative")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.spectral_tol > 0:
            raise ValueError("spectral_tol must be positive")


@dataclass
class SolverState:
    """Iterates ``(u, v, w)`` of the dual ADMM.

    ``xtu`` caches ``X^T u`` for the current ``u``.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    iter: int = 0
    rel_err: float = np.inf
    xtu: np.ndarray | None = None

    @classmethod
    def zeros(cls, n, p):
        return cls(np.zeros(n), np.zeros(p), np.zeros(p), xtu=np.zeros(p))


@dataclass
class FitResult:
    """Outcome of a solver run; ``beta_hat`` is the coefficient estimate."""

    beta_hat: np.ndarray
    iterations: int
    converged: bool
    rel_err_history: list = field(default_factory=list)
    primal_objective: float = np.nan
    dual_objective: float = np.nan
    wall_time: float = 0.0
    residual_history: list = field(default_factory=list)
    state: SolverState | None = None
    solver: str = "dual"

    @property
    def rel_err_final(self) -> float:
        return self.rel_err_history[-1] if self.rel_err_history else np.nan

    @property
    def duality_gap(self) -> float:
        return self.primal_objective - self.dual_objective


def rel_err(new, old) -> float:
    """``||new - old|| / (1 + ||old||)``."""
    return float(np.linalg.norm(new - old) / (1.0 + np.linalg.norm(old)))


def primal_objective(problem: RegressionProblem, cfg: HuberFusedConfig, beta):
    """Huber fused-lasso objective at ``beta``."""
    beta = np.asarray(beta, dtype=float)
    r = problem.y - problem.X @ beta
    return empirical_huber(r, cfg.tau) + fused_penalty_value(beta, cfg)


def dual_objective(problem: RegressionProblem, cfg: HuberFusedConfig, u,
                   atol=1e-12):
    """Dual value ``<u, y> - (n/2) ||u||^2`` for a box-feasible ``u``.

    The conjugate penalty term is dropped: along the iterates it is the
    indicator of a constraint that holds in the limit.  Use
    :func:`feasible_dual_objective` for a certified lower bound.
    """
    u = np.asarray(u, dtype=float)
    n = problem.n
    bound = cfg.tau / n
    if np.max(np.abs(u)) > bound * (1.0 + atol) + atol:
        raise DualInfeasibleError(
            f"||u||_inf = {np.max(np.abs(u)):.3e} exceeds tau/n = {bound:.3e}")
    return float(u @ problem.y - 0.5 * n * (u @ u))


def feasible_dual_objective(problem: RegressionProblem, cfg: HuberFusedConfig,
                            u, bisect_steps=60):
    """Certified lower bound on the optimal primal value.

    ``u`` is shrunk to ``theta * u`` with the largest ``theta`` in [0, 1]
    such that ``X^T (theta u)`` lies in the domain of the conjugate
    penalty; the dual function is finite there and weak duality applies.

    Returns
    -------
    value : float
    theta : float
    """
    u = np.clip(np.asarray(u, dtype=float), -cfg.tau / problem.n, cfg.tau / problem.n)
    xtu = problem.X.T @ u
    if in_fused_dual_domain(xtu, cfg):
        theta = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(bisect_steps):
            mid = 0.5 * (lo + hi)
            if in_fused_dual_domain(mid * xtu, cfg):
                lo = mid
            else:
                hi = mid
        theta = lo
    return dual_objective(problem, cfg, theta * u), theta


def estimate_eta(X, sigma, n=None, margin=0.0, spectral_tol=1e-6):
    """Smallest safe ``eta`` for which ``(eta - n) I - sigma X X^T`` is PSD.

    Returns ``n + sigma * L + margin`` where ``L`` is an inflated power
    iteration estimate of ``||X||_2 ** 2``.
    """
    X = np.asarray(X, dtype=float)
    if n is None:
        n = X.shape[0]
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    L = spectral_norm_sq(X, tol=spectral_tol)
    return float(n + sigma * L + margin)


def _xtu(state, problem):
    if state.xtu is None:
        state.xtu = problem.X.T @ state.u
    return state.xtu


def dual_u_step(state: SolverState, problem: RegressionProblem,
                cfg: HuberFusedConfig, opts: SolverOptions, eta: float):
    """Box projection of ``(y - X w + sigma X v + S u) / eta``.

    ``S u = (eta - n) u - sigma X (X^T u)`` is applied without forming
    ``X X^T``; the three terms are folded into a single product with ``X``.
    """
    n = problem.n
    sigma = opts.sigma
    xtu = _xtu(state, problem)
    rhs = problem.y + problem.X @ (sigma * state.v - state.w - sigma * xtu)
    rhs += (eta - n) * state.u
    bound = cfg.tau / n
    return np.clip(rhs / eta, -bound, bound)


def dual_v_step(state: SolverState, problem: RegressionProblem,
                cfg: HuberFusedConfig, opts: SolverOptions):
    """``X^T u + w/sigma - Prox_{sigma p}(sigma X^T u + w) / sigma``.

    Expects ``state.u`` (and ``state.xtu``) to hold the updated ``u``.
    """
    sigma = opts.sigma
    arg = sigma * _xtu(state, problem) + state.w
    return (arg - fused_prox(arg, cfg, sigma)) / sigma


def dual_w_step(state: SolverState, sigma: float, rho: float,
                problem: RegressionProblem):
    return state.w - sigma * rho * (state.v - _xtu(state, problem))


def solve(problem: RegressionProblem, cfg: HuberFusedConfig,
          opts: SolverOptions | None = None, state: SolverState | None = None):
    """Fit the Huber fused-lasso model with the dual semi-proximal ADMM.

    Parameters
    ----------
    problem : RegressionProblem
    cfg : HuberFusedConfig
    opts : SolverOptions, optional
    state : SolverState, optional
        Starting iterates; zeros by default.

    Returns
    -------
    FitResult
        ``beta_hat`` is the final multiplier ``w``.  ``converged`` is False
        when ``max_iter`` was reached first.
    """
    opts = SolverOptions() if opts is None else opts
    n, p = problem.n, problem.p
    if state is None:
        state = SolverState.zeros(n, p)
    else:
        state = SolverState(state.u.copy(), state.v.copy(), state.w.copy())
    X = problem.X

    t0 = time.perf_counter()
    L = spectral_norm_sq(X, tol=opts.spectral_tol)
    sigma = opts.sigma
    eta = n + sigma * L + opts.eta_margin
    step_opts = opts
    history, resid = [], []
    converged = False
    k = 0
    for k in range(1, int(opts.max_iter) + 1):
        w_old = state.w
        v_old = state.v
        state.u = dual_u_step(state, problem, cfg, step_opts, eta)
        state.xtu = X.T @ state.u
        state.v = dual_v_step(state, problem, cfg, step_opts)
        state.w = dual_w_step(state, sigma, opts.rho, problem)
        state.iter = k
        state.rel_err = rel_err(state.w, w_old)
        history.append(state.rel_err)
        r_norm = float(np.linalg.norm(state.v - state.xtu))
        resid.append(r_norm)
        if state.rel_err < opts.tol:
            converged = True
            break
        if opts.adaptive_sigma and k % 10 == 0:
            s_norm = sigma * float(np.linalg.norm(X @ (state.v - v_old)))
            new_sigma = sigma
            if r_norm > 10.0 * s_norm:
                new_sigma = 2.0 * sigma
            elif s_norm > 10.0 * r_norm:
                new_sigma = 0.5 * sigma
            if new_sigma != sigma:
                sigma = new_sigma
                eta = n + sigma * L + opts.eta_margin
                step_opts = SolverOptions(
                    sigma=sigma, rho=opts.rho, eta_margin=opts.eta_margin,
                    tol=opts.tol, max_iter=opts.max_iter,
                    spectral_tol=opts.spectral_tol)
    wall = time.perf_counter() - t0

    beta = state.w.copy()
    return FitResult(
        beta_hat=beta,
        iterations=k,
        converged=converged,
        rel_err_history=history,
        primal_objective=primal_objective(problem, cfg, beta),
        dual_objective=dual_objective(problem, cfg, state.u),
        wall_time=wall,
        residual_history=resid,
        state=state,
        solver="dual",
    )
