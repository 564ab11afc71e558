"""
Maxima of a random number of draws
==================================

If ``N`` is independent of the i.i.d. ``X_i`` with generating function
``M``, the largest of ``X_1, ..., X_N`` has CDF ``M(F)`` and density
``M'(F) f``.  The sampler below draws such maxima directly; their empirical
CDF agrees with the integral of the weighted density.
"""

import numpy as np
from scipy.integrate import cumulative_trapezoid

import wden

model = wden.make_model("SeparatedBimodal")
rng = np.random.default_rng(7)
t = np.linspace(-6, 6, 20001)
for nspec in (wden.NSpec("degenerate", 3), wden.NSpec("geometric", 0.3), wden.NSpec("poisson+1", 2.0)):
    y = np.sort(wden.sample_max_of_N(model, nspec, 10_000, rng))
    G = np.interp(y, t, cumulative_trapezoid(wden.true_g(model, nspec.weight(), t), t, initial=0.0))
    ks = np.max(np.abs(np.arange(1, y.size + 1) / y.size - G))
    print("%-12s  mean of maxima %.3f   KS distance to int g: %.4f" % (nspec.weight().label, y.mean(), ks))

# the pile-up weight recovers the density behind minima of a geometric count
pgf = wden.Pgf.geometric(0.5)
u = np.linspace(0, 0.9, 4)
print("pile-up weight at", u, "->", np.round(wden.pileup_weight(pgf, u), 4))
