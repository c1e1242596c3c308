"""Synthetic regression problems with correlated design and heavy-tailed noise.

All randomness flows through :class:`numpy.random.Generator` with the
PCG64 bit generator, seeded explicitly, so every draw is replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dual import RegressionProblem

__all__ = [
    "NOISE_KINDS",
    "NoiseSpec",
    "SimulationSpec",
    "GroundTruth",
    "gen_design",
    "gen_beta",
    "gen_noise",
    "gen_problem",
]

NOISE_KINDS = ("gaussian", "t", "lognormal", "laplace")
_ALIASES = {"student_t": "t", "normal": "gaussian"}

GAUSSIAN_SD = 0.05
T_DF = 1.5
LOGNORMAL_SIGMA = 2.0
LAPLACE_SCALE = 1.0
AR_COEF = 0.5


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class NoiseSpec:
    """Noise law plus an optional multiplier.

    ``kind`` is one of ``gaussian`` (sd 0.05), ``t`` (1.5 degrees of
    freedom), ``lognormal`` (log-scale 0, 2) or ``laplace`` (location 0,
    scale 1).  ``centered`` subtracts the analytic mean of the lognormal
    law, which is otherwise used as is.
    """

    kind: str = "gaussian"
    scale: float = 1.0
    centered: bool = False

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in NOISE_KINDS:
            raise ValueError(
                f"unknown noise law {self.kind!r}; expected one of {NOISE_KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.scale < 0:
            raise ValueError("noise scale must be nonnegative")


@dataclass(frozen=True)
class SimulationSpec:
    n: int
    p: int
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.noise, str):
            object.__setattr__(self, "noise", NoiseSpec(self.noise))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.p < 5:
            raise ValueError("p must be at least 5 for the block coefficient pattern")


@dataclass(frozen=True)
class GroundTruth:
    beta_star: np.ndarray
    support: np.ndarray


def gen_design(n, p, seed):
    """Rows i.i.d. N(0, Sigma) with ``Sigma[i, j] = 0.5 ** |i - j|``.

    Generated column by column with the stationary AR(1) recursion, which
    reproduces that covariance exactly in O(np).
    """
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    e = _rng(seed).standard_normal((p, n))
    X = np.empty((p, n))
    X[0] = e[0]
    innov = math.sqrt(1.0 - AR_COEF ** 2)
    for j in range(1, p):
        X[j] = AR_COEF * X[j - 1] + innov * e[j]
    return np.ascontiguousarray(X.T)


def gen_beta(p) -> GroundTruth:
    """Block-sparse truth: ones on one block, -1.5 on another, zero elsewhere.

    With 1-based index ``i``: ``beta_i = 1`` for ``ceil(p/5) + 1 <= i <=
    ceil(2p/5)`` and ``beta_i = -1.5`` for ``ceil(3p/5) + 1 <= i <=
    ceil(3p/4)``.
    """
    if p < 5:
        raise ValueError("p must be at least 5")
    beta = np.zeros(p)
    # integer ceilings avoid float rounding in p/5 etc.
    c = lambda a, b: -((-a * p) // b)  # noqa: E731
    beta[c(1, 5):c(2, 5)] = 1.0
    beta[c(3, 5):c(3, 4)] = -1.5
    return GroundTruth(beta, np.flatnonzero(beta))


def gen_noise(n, noise, seed):
    """Draw ``n`` i.i.d. errors from the named law."""
    if isinstance(noise, str):
        noise = NoiseSpec(noise)
    if n < 1:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    if noise.kind == "gaussian":
        eps = rng.normal(0.0, GAUSSIAN_SD, n)
    elif noise.kind == "t":
        eps = rng.standard_t(T_DF, n)
    elif noise.kind == "lognormal":
        eps = rng.lognormal(0.0, LOGNORMAL_SIGMA, n)
        if noise.centered:
            eps -= math.exp(LOGNORMAL_SIGMA ** 2 / 2)
    else:
        eps = rng.laplace(0.0, LAPLACE_SCALE, n)
    return noise.scale * eps


def gen_problem(spec: SimulationSpec):
    """Build ``y = X beta* + eps`` for ``spec``; returns (problem, truth)."""
    design_seed, noise_seed = np.random.SeedSequence(spec.seed).spawn(2)
    X = gen_design(spec.n, spec.p, design_seed)
    truth = gen_beta(spec.p)
    eps = gen_noise(spec.n, spec.noise, noise_seed)
    y = X @ truth.beta_star + eps
    return RegressionProblem(X, y), truth
