"""
Choosing the kernel bandwidth
=============================

The Gaussian kernel competitor picks its bandwidth by 10-fold least
squares cross-validation.  The curve is compared with the Monte Carlo MISE
of the kernel estimate, whose minimiser is the best bandwidth in hindsight.
"""

import numpy as np

import wden

model = wden.make_model("Uniform")
x = wden.sample_model(model, 1000, wden.replication_stream(0, 0), bound=model.half_support)
selection = wden.select_h_lscv(x, folds=10, seed=0)
print("rule of thumb h = %.4f, LSCV h = %.4f" % (selection.h_rot, selection.h_lscv))

config = wden.ExperimentConfig(model="Uniform", weight=wden.WeightSpec.degenerate(1), n=1000, reps=10, seed=0)
h_mise, hs, mise = wden.h_mise_scan(config, points=20)
for h, m in zip(hs, mise):
    print("h %.4f  MISE %.3e%s" % (h, m, "  <- minimum" if h == h_mise else ""))

# the estimate with the selected bandwidth, weighted for a geometric maximum
grid = wden.make_grid(9, model.half_support)
g_hat = wden.plug_in_kernel(x, wden.WeightSpec.geometric(0.5), selection, grid)
print("L2 risk of the kernel plug-in: %.3e"
      % wden.lp_risk(g_hat.values, wden.true_g(model, wden.WeightSpec.geometric(0.5), grid), 2))
print("mass of g_hat on the grid: %.4f" % wden.grid_integral(g_hat.values, model.half_support))
