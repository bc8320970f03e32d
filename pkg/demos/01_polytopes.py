"""
Polytopes from point clouds
===========================

Reduce a point cloud to its vertices, then query support values,
slices, nearest points and Hausdorff distances.
"""

import numpy as np
import contchoquet as cc

rng = np.random.default_rng(0)
cloud = rng.normal(size=(40, 2))
P = cc.extreme_points(cloud)
print(f"{len(cloud)} points, {len(P)} vertices")

# support value and the slice of vertices near the top in direction f
f = cc.direction([1, 1])
print("support:", cc.support(P, f))
print("slice (gamma=0.5):\n", cc.slice_vertices(P, f, 0.5))

# nearest point of the hull to an outside point
x = np.array([4.0, -1.0])
p, dist = cc.nearest_point(P, x)
print("projection", p, "at distance", dist)

# Hausdorff distance to a translate equals the shift length
Q = P.translate([0.3, 0.4])
print("h(P, P + v) =", cc.hausdorff(P, Q))

# sampled support gaps approach it from below
for n in (4, 64, 4096):
    print(n, "directions:", cc.support_gap_sampled(P, Q, n))
