"""Huber loss, fused-lasso penalty and the proximal operators built on them.

Every operator here is a pure function of plain float arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a soft dependency
    nb = None

__all__ = [
    "HuberFusedConfig",
    "DifferenceOperator",
    "huber_value",
    "huber_derivative",
    "empirical_huber",
    "huber_conjugate",
    "soft_threshold",
    "project_inf_ball",
    "tv1d_prox",
    "fused_prox",
    "fused_conjugate_prox",
    "fused_penalty_value",
    "in_fused_dual_domain",
]


@dataclass(frozen=True)
class HuberFusedConfig:
    """Model hyperparameters of the Huber fused-lasso estimator.

    Parameters
    ----------
    tau : float
        Knot of the Huber loss (robustification threshold), ``tau > 0``.
    lambda1 : float
        Weight of the l1 penalty on the coefficients.
    lambda2 : float
        Weight of the l1 penalty on successive coefficient differences.
    """

    tau: float = 0.5
    lambda1: float = 0.01
    lambda2: float = 0.01

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.lambda1 >= 0:
            raise ValueError(f"lambda1 must be nonnegative, got {self.lambda1}")
        if not self.lambda2 >= 0:
            raise ValueError(f"lambda2 must be nonnegative, got {self.lambda2}")

    def scaled(self, t: float) -> "HuberFusedConfig":
        """Return a copy with both penalty weights multiplied by ``t``."""
        if not t > 0:
            raise ValueError(f"scale must be positive, got {t}")
        return HuberFusedConfig(self.tau, t * self.lambda1, t * self.lambda2)


class DifferenceOperator:
    """Matrix-free first-difference operator ``D`` of shape ``(p - 1, p)``.

    ``(D @ b)[j] = b[j + 1] - b[j]``.
    """

    def __init__(self, p: int):
        if p < 1:
            raise ValueError("p must be at least 1")
        self.p = int(p)

    @property
    def shape(self):
        return (self.p - 1, self.p)

    def apply(self, b):
        return np.diff(np.asarray(b, dtype=float))

    def adjoint(self, z):
        z = np.asarray(z, dtype=float)
        if z.shape != (self.p - 1,):
            raise ValueError(f"expected length {self.p - 1}, got {z.shape}")
        out = np.zeros(self.p)
        out[:-1] -= z
        out[1:] += z
        return out

    def __matmul__(self, b):
        return self.apply(b)


def _check_tau(tau):
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")


def huber_value(x, tau):
    """Huber loss ``h_tau`` evaluated elementwise.

    Quadratic ``x**2 / 2`` on ``|x| <= tau`` and linear
    ``tau * |x| - tau**2 / 2`` outside.
    """
    _check_tau(tau)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.where(ax <= tau, 0.5 * x * x, tau * ax - 0.5 * tau * tau)
    return out[()] if out.ndim == 0 else out


def huber_derivative(x, tau):
    """Derivative of the Huber loss, i.e. ``x`` clipped to ``[-tau, tau]``."""
    _check_tau(tau)
    return np.clip(np.asarray(x, dtype=float), -tau, tau)


def empirical_huber(z, tau):
    """Mean Huber loss ``(1/n) sum_i h_tau(z_i)``."""
    z = np.asarray(z, dtype=float).ravel()
    if z.size == 0:
        raise ValueError("empirical_huber needs at least one sample")
    return float(np.mean(huber_value(z, tau)))


def huber_conjugate(u, tau):
    """Fenchel conjugate of :func:`empirical_huber`.

    Returns ``(n/2) ||u||^2`` when ``||u||_inf <= tau/n`` and ``inf``
    when ``u`` lies outside that box.
    """
    _check_tau(tau)
    u = np.asarray(u, dtype=float).ravel()
    n = u.size
    if n == 0:
        raise ValueError("huber_conjugate needs a nonempty vector")
    if np.max(np.abs(u)) > tau / n:
        return np.inf
    return 0.5 * n * float(u @ u)


def soft_threshold(x, mu):
    """Prox of ``mu * ||.||_1``: ``sign(x) * max(|x| - mu, 0)``."""
    if mu < 0:
        raise ValueError(f"threshold must be nonnegative, got {mu}")
    x = np.asarray(x, dtype=float)
    if mu == 0:
        return x.copy()
    return np.sign(x) * np.maximum(np.abs(x) - mu, 0.0)


def project_inf_ball(x, radius):
    """Euclidean projection onto ``{v : ||v||_inf <= radius}``."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return np.clip(np.asarray(x, dtype=float), -radius, radius)


def _tv1d_condat(y, lam, out):
    # Condat's direct algorithm, one forward pass with occasional restarts.
    n = y.shape[0]
    k = k0 = kplus = kminus = 0
    twolam = 2.0 * lam
    minlam = -lam
    umin = lam
    umax = minlam
    vmin = y[0] - lam
    vmax = y[0] + lam
    done = False
    while not done:
        while k == n - 1:
            if umin < 0.0:
                while k0 <= kminus:
                    out[k0] = vmin
                    k0 += 1
                k = kminus = k0
                vmin = y[k0]
                umin = lam
                umax = vmin + umin - vmax
            elif umax > 0.0:
                while k0 <= kplus:
                    out[k0] = vmax
                    k0 += 1
                k = kplus = k0
                vmax = y[k0]
                umax = minlam
                umin = vmax + umax - vmin
            else:
                vmin += umin / (k - k0 + 1)
                while k0 <= k:
                    out[k0] = vmin
                    k0 += 1
                done = True
                break
        if done:
            break
        umin += y[k + 1] - vmin
        if umin < minlam:
            while k0 <= kminus:
                out[k0] = vmin
                k0 += 1
            k = kplus = kminus = k0
            vmin = y[k0]
            vmax = vmin + twolam
            umin = lam
            umax = minlam
            continue
        umax += y[k + 1] - vmax
        if umax > lam:
            while k0 <= kplus:
                out[k0] = vmax
                k0 += 1
            k = kplus = kminus = k0
            vmax = y[k0]
            vmin = vmax - twolam
            umin = lam
            umax = minlam
            continue
        k += 1
        if umin >= lam:
            kminus = k
            vmin += (umin - lam) / (kminus - k0 + 1)
            umin = lam
        if umax <= minlam:
            kplus = k
            vmax += (umax + lam) / (kplus - k0 + 1)
            umax = minlam
    return out


if nb is not None:
    _tv1d_kernel = nb.njit(cache=True, nogil=True)(_tv1d_condat)
else:  # pragma: no cover
    _tv1d_kernel = _tv1d_condat


def tv1d_prox(y, lam):
    """Exact minimizer of ``0.5 ||b - y||^2 + lam * sum_j |b[j+1] - b[j]|``.

    Uses Condat's direct algorithm (linear time in practice, no
    iterations to tune).

    Parameters
    ----------
    y : array_like, shape (p,)
        Signal to denoise.
    lam : float
        Nonnegative total-variation weight. ``lam == 0`` returns ``y``.

    Returns
    -------
    ndarray, shape (p,)
        The piecewise-constant denoised signal.
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    y = np.ascontiguousarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("tv1d_prox expects a nonempty 1-d array")
    if lam == 0 or y.size == 1:
        return y.copy()
    return _tv1d_kernel(y, float(lam), np.empty_like(y))


def fused_prox(x, cfg: HuberFusedConfig, t: float = 1.0):
    """Prox of ``t * g`` with ``g(b) = lambda1 ||b||_1 + lambda2 ||D b||_1``.

    Computed as the soft-threshold of the total-variation prox, which is
    exact for this pair of penalties.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    b = tv1d_prox(x, t * cfg.lambda2)
    return soft_threshold(b, t * cfg.lambda1)


def fused_conjugate_prox(x, cfg: HuberFusedConfig, mu: float):
    """Prox of ``mu * g*`` through Moreau's identity.

    ``Prox_{mu g*}(x) = x - mu * Prox_{g/mu}(x / mu)``.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    x = np.asarray(x, dtype=float)
    return x - mu * fused_prox(x / mu, cfg, 1.0 / mu)


def fused_penalty_value(beta, cfg: HuberFusedConfig) -> float:
    beta = np.asarray(beta, dtype=float)
    return float(cfg.lambda1 * np.sum(np.abs(beta))
                 + cfg.lambda2 * np.sum(np.abs(np.diff(beta))))


def _dual_domain_scan(v, l1, l2):
    # (D^T z)_j = z_{j-1} - z_j with z_0 = z_p = 0, so z_j = z_{j-1} - v_j + a_j;
    # track the interval of reachable z_j under both box constraints
    lo = 0.0
    hi = 0.0
    m = v.shape[0]
    for j in range(m):
        lo = lo - v[j] - l1
        hi = hi - v[j] + l1
        if j < m - 1:
            lo = max(lo, -l2)
            hi = min(hi, l2)
            if lo > hi:
                return False
    return lo <= 0.0 <= hi


if nb is not None:
    _dual_domain_kernel = nb.njit(cache=True, nogil=True)(_dual_domain_scan)
else:  # pragma: no cover
    _dual_domain_kernel = _dual_domain_scan


def in_fused_dual_domain(v, cfg: HuberFusedConfig, atol: float = 0.0) -> bool:
    """Test whether ``v`` lies in the domain of the conjugate penalty ``g*``.

    ``dom g* = {a + D^T z : ||a||_inf <= lambda1, ||z||_inf <= lambda2}``,
    decided exactly in one pass over ``v``.  ``atol`` enlarges both boxes.
    """
    v = np.ascontiguousarray(v, dtype=float).ravel()
    return bool(_dual_domain_kernel(v, cfg.lambda1 + atol, cfg.lambda2 + atol))
