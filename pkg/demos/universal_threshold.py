"""
Where the universal threshold lands
===================================

The mean L2 risk of the plug-in estimate is traced as a function of the
threshold constant ``kappa``.  The data-driven universal value
``sigma * sqrt(2 log n)`` is marked; it should sit near the bottom of the
curve.
"""

import numpy as np

import wden

config = wden.ExperimentConfig(model="StronglySkewed", weight=wden.WeightSpec.degenerate(2), n=1000, reps=5, seed=3)
sweep = wden.kappa_sweep(config, points=21)

for kappa, risk in zip(sweep.kappas, sweep.risks):
    mark = "  <- universal" if kappa == sweep.universal else ""
    print("kappa %6.3f  risk %.3e %s%s" % (kappa, risk, "*" * int(20 * sweep.risks.min() / risk), mark))
print("minimiser %.3f, universal %.3f" % (sweep.argmin, sweep.universal))

# zero threshold keeps every coefficient up to j2 and is clearly worse
print("risk at kappa=0 is %.1fx the minimum" % (sweep.risks[0] / np.min(sweep.risks)))
