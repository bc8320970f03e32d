"""
Moving polytopes
================

Polytope-valued maps on [0, 1]: Hausdorff continuity, lower
semicontinuity of the vertex map, and following one vertex through time.
"""

import numpy as np
import contchoquet as cc

square = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
grid = np.linspace(0, 1, 51)

F = cc.rotation_family(square)          # quarter turn over [0, 1]
rep = cc.continuity_audit(F, grid)
print("rotation: declared Lip", F.lipschitz, "observed", rep.max_modulus,
      "pass", rep.passed)

# follow the corner (1, 1) as the square turns
ts = 1.0 / np.arange(1, 6)
track = cc.track_extreme_point(F, 0.0, [1, 1], ts)
print("exposing direction", track.direction, "margin", track.margin)
for t, a in zip(ts, track.points):
    print(f"t={t:.3f}  a={a}  |a - e0|={np.linalg.norm(a - [1, 1]):.4f}")

# a fifth point dives into the square and comes back out
roam = [np.r_[square, [[0, 1.5]]], np.r_[square, [[0, 0]]], np.r_[square, [[0, 1.5]]]]
G = cc.vertex_interpolation([0, 0.5, 1], roam)
lsc = cc.lsc_ext_audit(G, np.linspace(0, 1, 101), G.lipschitz + 0.1)
print("lsc passed:", lsc.passed)
for r in lsc.failures:
    print(f"  vertex {r.worst_vertex} lost on [{r.t_left:.2f}, {r.t_right:.2f}]")
