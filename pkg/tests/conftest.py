import itertools

import numpy as np
import pytest

from contchoquet import Polytope

SQUARE = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
TRIANGLE = [[0, 0], [1, 0], [0, 1]]


@pytest.fixture
def square():
    return Polytope(SQUARE, is_reduced=True)


@pytest.fixture
def triangle():
    return Polytope(TRIANGLE, is_reduced=True)


def random_sphere_polytope(rng, d, n):
    """Points on the unit sphere are all extreme, so no LP is needed."""
    V = rng.standard_normal((n, d))
    V /= np.linalg.norm(V, axis=1)[:, None]
    return Polytope(V, is_reduced=True)


def qp_projection_distance(V, x):
    """Oracle: distance from x to conv(V) via cvxopt's interior-point QP."""
    from cvxopt import matrix, solvers

    solvers.options.update(show_progress=False, abstol=1e-12, reltol=1e-12,
                           feastol=1e-12)
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    G = V @ V.T
    sol = solvers.qp(matrix(G + 1e-14 * np.eye(n)), matrix(-(V @ x)),
                     matrix(-np.eye(n)), matrix(np.zeros(n)),
                     matrix(np.ones((1, n))), matrix(1.0))
    lam = np.clip(np.array(sol["x"]).ravel(), 0, None)
    lam /= lam.sum()
    return float(np.linalg.norm(lam @ V - x))


def segment_distance(a, b, x):
    ab = b - a
    denom = ab @ ab
    s = 0.0 if denom == 0 else np.clip((x - a) @ ab / denom, 0.0, 1.0)
    return float(np.linalg.norm(a + s * ab - x))


def planar_distance_bruteforce(V, x):
    """Oracle for d <= 2: zero inside some vertex triangle, else the
    closed-form minimum over every vertex-pair segment."""
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    if V.shape[1] == 2 and V.shape[0] >= 3:
        for i, j, k in itertools.combinations(range(V.shape[0]), 3):
            T = np.column_stack([V[j] - V[i], V[k] - V[i]])
            if abs(np.linalg.det(T)) < 1e-14:
                continue
            s = np.linalg.solve(T, x - V[i])
            if s.min() >= -1e-12 and s.sum() <= 1 + 1e-12:
                return 0.0
    if V.shape[0] == 1:
        return float(np.linalg.norm(V[0] - x))
    return min(segment_distance(V[i], V[j], x)
               for i, j in itertools.combinations(range(V.shape[0]), 2))


def brute_hausdorff(A, B, point_distance):
    one = lambda P, Q: max(point_distance(Q, a) for a in P)
    return max(one(A, B), one(B, A))


def grid_search_distance(V, x, m=2001):
    """Dense search: distance from x to points sampled on every vertex-pair
    segment (m samples each). Upper-bounds the true distance to the boundary."""
    V = np.asarray(V, dtype=float)
    s = np.linspace(0.0, 1.0, m)[:, None]
    best = np.inf
    for i, j in itertools.combinations(range(V.shape[0]), 2):
        pts = (1 - s) * V[i] + s * V[j]
        best = min(best, np.linalg.norm(pts - x, axis=1).min())
    return float(best)
