"""
Representing measures
=====================

Write an interior point as an average of vertices, measure how far two
discrete measures are apart in the weak* sense, and repair a measure
that drifted off the vertex set.
"""

import numpy as np
import contchoquet as cc

P = cc.Polytope([[0, 0], [2, 0], [2, 1], [0, 1], [1, 1.5]])
x = np.array([1.2, 0.7])

mu = cc.caratheodory_measure(P, x)
print(mu)
print("barycenter", cc.barycenter(mu), "target", x)

# a representation only needs to be gamma-close
print(cc.gamma_represents(cc.dirac([1.0, 1.0]), x, 0.5))   # gap ~0.36
print(cc.gamma_represents(cc.dirac([1.0, 1.0]), x, 0.1))

# weak* distance through a fixed random cosine family
fam = cc.TestFunctionFamily(seed=0, dim=2)
nu = cc.dirac([2.0, 1.0])
print("d(mu, nu) =", cc.weak_star_distance(mu, nu, fam, N=40))
print("d(mu, mu) =", cc.weak_star_distance(mu, mu, fam, N=40))

# atoms slightly inside the polytope: transport them back onto vertices
drifted = cc.DiscreteMeasure(mu.atoms * 0.98 + 0.01, mu.weights)
c = cc.RepresentingMeasureConstraint(P, x, gamma=0.05)
print("in L before:", cc.in_L(drifted, c))
fixed = cc.repair_witness(drifted, c)
print("in L after: ", cc.in_L(fixed, c))

# measures serialize to a small text record
print(cc.to_record(fixed))
