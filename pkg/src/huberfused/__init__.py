"""Robust sparse regression with the Huber loss and a fused-lasso penalty.

The main entry point is :func:`solve`, a semi-proximal ADMM working on the
dual problem.  :mod:`huberfused.baseline` holds reference solvers,
:mod:`huberfused.simgen` synthetic data and :mod:`huberfused.bench` the
experiment runner behind the ``huberfused`` command.
"""

from .dual import (
    FitResult,
    RegressionProblem,
    SolverOptions,
    SolverState,
    dual_objective,
    primal_objective,
    solve,
)
from .prox import HuberFusedConfig, fused_prox, tv1d_prox

__version__ = "0.1.0"

__all__ = [
    "FitResult",
    "HuberFusedConfig",
    "RegressionProblem",
    "SolverOptions",
    "SolverState",
    "dual_objective",
    "fused_prox",
    "primal_objective",
    "solve",
    "tv1d_prox",
]
