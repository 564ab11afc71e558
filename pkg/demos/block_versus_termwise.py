"""
Grouping coefficients into blocks
=================================

Keeping or killing whole blocks of wavelet coefficients is compared with
deciding coefficient by coefficient (block length one) for several risk
exponents ``p``.  The exponent also sets the block length and the block
statistic, so each ``p`` gives a different estimator.
"""

import wden

for name in ("Uniform", "Kurtotic"):
    config = wden.ExperimentConfig(model=name, weight=wden.WeightSpec.degenerate(2), n=1000, reps=10, seed=0)
    print(name)
    for p, block, termwise in wden.p_sweep(config, [1.0, 2.0, 3.0]):
        print("  p=%.1f  block %.3e   term-by-term %.3e" % (p, block, termwise))
