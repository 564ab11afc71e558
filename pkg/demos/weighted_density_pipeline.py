"""
From a sample to a weighted density
===================================

A sample from ``f`` is turned into four curves: the block thresholding
estimate of ``f``, the empirical CDF, the weight evaluated through it and
finally the plug-in estimate of ``g = w(F) f``.  Here the weight is
``w(u) = 2u``, the density of the larger of two independent draws.
"""

import numpy as np

import wden

# Kurtotic normal mixture, 1000 points, a fixed random stream
model = wden.make_model("Kurtotic")
rng = wden.replication_stream(1, 0)
x = wden.sample_model(model, 1000, rng, bound=model.half_support)

# estimate f on the 512-point grid over [-4, 4] with the coarse level fixed at 3
config = wden.EstimatorConfig(coarse_level=3)
f_hat = wden.estimate_density(x, config)
print("levels j1..j2 = %d..%d, block length L = %d, kappa = %.3f"
      % (f_hat.scales.j1, f_hat.scales.j2, f_hat.scales.L, f_hat.scales.kappa))

# the empirical CDF and the weight through it
weight = wden.WeightSpec.degenerate(2)
cdf = wden.EmpiricalCdf(x)
g_hat = wden.plug_in(f_hat, cdf, weight)

# compare with the truth on the grid
grid = f_hat.grid
f_true = wden.model_pdf(model, grid)
g_true = wden.true_g(model, weight, grid)
print("L2 risk of f_hat: %.2e" % wden.lp_risk(f_hat.values, f_true, 2))
print("L2 risk of g_hat: %.2e" % wden.lp_risk(g_hat.values, g_true, 2))

# a coarse text rendering of the estimated and true g
for t in np.linspace(-2, 2, 9):
    i = int(np.argmin(np.abs(grid - t)))
    print("x=%5.2f  g_hat %-26s g %.3f" % (grid[i], "#" * int(15 * g_hat.values[i]), g_true[i]))
