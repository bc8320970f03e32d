"""
Selections
==========

Point selections of a rotating unit square, then a continuous choice of
representing measures built from charts and a partition of unity.
"""

import numpy as np
import contchoquet as cc

F = cc.rotation_family([[0, 0], [1, 0], [1, 1], [0, 1]])
grid = np.linspace(0, 1, 11)

# piecewise-linear eps-selection, audited on a 10x grid
sel = cc.michael_epsilon_selection(F, 0.05, grid)
print("eps-selection max distance", sel.max_distance)

# metric projection of a fixed point is a continuous selection
p = cc.continuous_selection(F, [0.5, 0.5])
print("p(0) =", p(0.0), " p(1) =", p(1.0))

# charts with witness measures, blended by tent functions
fam = cc.TestFunctionFamily(seed=0, dim=2)
cover = cc.build_cover(F, p, gamma=0.1, delta=0.05, fam=fam, N=40, init_grid=grid)
pou = cc.partition_of_unity(cover)
print(len(cover.charts), "charts, radii", [round(c.radius, 3) for c in cover.charts])

mu = cc.l_delta(cover, pou, 0.37)
print("l_delta(0.37) has", len(mu), "atoms, weights", np.round(mu.weights, 3))

report = cc.verify_delta_selection(F, p, cover, pou, 0.1, 0.05, fam, 40,
                                   np.linspace(0, 1, 201))
print("verified:", report.passed, " max weak* distance", report.max_distance,
      " modulus", report.modulus)
