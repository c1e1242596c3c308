"""
Proximal operators of the fused lasso
=====================================

The fused-lasso prox is a 1D total-variation prox followed by soft
thresholding.  Both pieces are exact, and each comes with a certificate we
can check.
"""

import numpy as np

from huberfused import HuberFusedConfig, fused_prox, tv1d_prox
from huberfused.prox import fused_conjugate_prox, in_fused_dual_domain

rng = np.random.default_rng(0)

# a noisy step signal
y = np.r_[np.zeros(20), np.ones(15), -1.5 * np.ones(15)] + 0.3 * rng.normal(size=50)

###############################################################################
# Total-variation denoising.  The partial sums of ``y - b`` never leave
# ``[-lam, lam]`` and end at zero; that is the optimality certificate.

lam = 1.0
b = tv1d_prox(y, lam)
s = np.cumsum(y - b)
print("pieces:", 1 + np.count_nonzero(np.abs(np.diff(b)) > 1e-12))
print("max |s| = %.4f, s_p = %.1e" % (np.abs(s).max(), s[-1]))

###############################################################################
# Adding the l1 part shrinks every piece towards zero.

cfg = HuberFusedConfig(tau=0.5, lambda1=0.2, lambda2=1.0)
print(np.round(fused_prox(y, cfg)[::5], 3))

###############################################################################
# Moreau's identity ties the prox of the penalty to the prox of its conjugate,
# and the conjugate prox always lands in the dual polytope.

mu = 0.7
v = fused_conjugate_prox(y, cfg, mu)
err = np.abs(v + mu * fused_prox(y / mu, cfg, 1 / mu) - y).max()
print("identity error %.1e, in dual domain: %s" % (err, in_fused_dual_domain(v, cfg, atol=1e-10)))
