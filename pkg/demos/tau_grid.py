"""
Choosing the Huber threshold
============================

``tau`` is picked from a fixed grid by in-sample MAE.  With heavy-tailed
noise MAE favours large ``tau``, while estimation error favours small ones.
"""

import numpy as np

from huberfused import HuberFusedConfig, SolverOptions
from huberfused.bench import default_tau_grid, emit_coefficient_profile, tau_grid_search
from huberfused.metrics import rlne
from huberfused.simgen import SimulationSpec, gen_problem

problem, truth = gen_problem(SimulationSpec(200, 300, "t", seed=3))
grid = default_tau_grid(problem.n, problem.p)
print("%d candidates, largest %.2f" % (len(grid), max(grid)))

best, rows = tau_grid_search(problem, HuberFusedConfig(), SolverOptions(tol=1e-3), grid)
for r in rows[::4]:
    print("tau %7.3f  mae %.3f  rlne %.3f" % (r["tau"], r["score"],
                                             rlne(r["fit"].beta_hat, truth.beta_star)))
print("selected tau", round(best, 3))

###############################################################################
# Box-plot positions of the coefficient profile.

chosen = next(r["fit"] for r in rows if r["tau"] == best)
print(emit_coefficient_profile(chosen))
print("truth at the same positions:", truth.beta_star[np.array([30, 90, 150, 203, 263]) - 1])
