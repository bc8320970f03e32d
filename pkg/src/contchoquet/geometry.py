"""Convex polytopes in V-representation.

Support functions, extreme points, slices, Euclidean projection and the
Hausdorff metric. Points and directions are plain 1-d float arrays; a
:class:`Polytope` wraps an ``(n, d)`` vertex array.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ._lp import linprog
from .exceptions import InputError

SLICE_TOL = 1e-12
NEAREST_TOL = 1e-12
_DUPLICATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of a finite vertex list.

    Parameters
    ----------
    vertices : array_like, shape (n, d)
    is_reduced : bool
        True when every row is an extreme point of the hull. Use
        :func:`extreme_points` to obtain a certified reduced polytope.
    """

    vertices: np.ndarray
    is_reduced: bool = False

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if V.ndim != 2 or V.shape[0] == 0 or V.shape[1] == 0:
            raise InputError("a polytope needs a nonempty (n, d) vertex array")
        if not np.isfinite(V).all():
            raise InputError("vertex coordinates must be finite")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def __repr__(self):
        return f"Polytope({self.vertices.tolist()!r}, is_reduced={self.is_reduced})"

    def translate(self, v):
        return Polytope(self.vertices + _as_point(v, self.dim), self.is_reduced)

    def diameter(self):
        V = self.vertices
        return float(np.sqrt(((V[:, None, :] - V[None, :, :]) ** 2).sum(-1).max()))


def _as_point(x, dim=None):
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0 or not np.isfinite(x).all():
        raise InputError("points need finite coordinates")
    if dim is not None and x.size != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {x.size}")
    return x


def _check_same_dim(A, B):
    if A.dim != B.dim:
        raise InputError(f"dimension mismatch: {A.dim} vs {B.dim}")


def direction(coords):
    """Return ``coords`` scaled to unit Euclidean norm."""
    f = _as_point(coords)
    norm = np.linalg.norm(f)
    if norm == 0.0:
        raise InputError("the zero vector has no direction")
    return f / norm


def lexsorted(points):
    """Rows of ``points`` in lexicographic order (first coordinate major)."""
    points = np.asarray(points, dtype=float)
    return points[np.lexsort(points.T[::-1])]


def support(P, f):
    """Support function ``c(f, P) = max_v <f, v>``."""
    f = _as_point(f, P.dim)
    return float((P.vertices @ f).max())


def in_hull(points, x, tol=1e-9):
    """Feasibility LP: is ``x`` a convex combination of ``points``?

    Returns the weight vector when feasible, else ``None``.
    """
    V = np.asarray(points, dtype=float)
    n = V.shape[0]
    A_eq = np.vstack([V.T, np.ones(n)])
    b_eq = np.concatenate([x, [1.0]])
    res = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq)
    return res.x if res.success else None


def extreme_points(points):
    """Extreme points of ``conv(points)`` as a reduced polytope.

    Exact and near duplicates (within 1e-12) are merged first. Each remaining
    point is then tested against the points still kept; a point that is a
    convex combination of the others (feasibility LP, tolerance 1e-9) is
    dropped. Sequential removal never changes the hull. Vertices come back in
    lexicographic order.
    """
    V = np.asarray(points, dtype=float)
    if V.ndim == 1:
        V = V.reshape(1, -1)
    if V.size == 0:
        raise InputError("extreme_points needs at least one point")
    V = lexsorted(V)
    unique = [V[0]]
    for v in V[1:]:
        if np.abs(np.asarray(unique) - v).max(axis=1).min() > _DUPLICATE_TOL:
            unique.append(v)
    V = np.array(unique)
    keep = np.ones(len(V), dtype=bool)
    for i in range(len(V)):
        others = keep.copy()
        others[i] = False
        if others.any() and in_hull(V[others], V[i]) is not None:
            keep[i] = False
    return Polytope(V[keep], is_reduced=True)


def reduce(P):
    """Reduced version of ``P`` (no-op when already reduced)."""
    return P if P.is_reduced else extreme_points(P.vertices)


def slice_vertices(P, f0, gamma):
    """Vertices of ``P`` in the open slice ``{<f0, x> > c(f0, P) - gamma}``.

    The strict inequality is evaluated as ``> threshold - 1e-12`` so that
    rounding never drops the maximizing face.
    """
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    values = P.vertices @ _as_point(f0, P.dim)
    threshold = values.max() - gamma
    return P.vertices[values > threshold - SLICE_TOL]


def _affine_minimizer(S):
    """Minimum-norm point of the affine hull of the rows of ``S``.

    Returns barycentric coordinates ``alpha`` (summing to one).
    """
    k = S.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = S @ S.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    alpha = sol[:k]
    return alpha / alpha.sum()


def _min_norm_point(V, tol=NEAREST_TOL, maxiter=1000):
    """Wolfe's algorithm: minimum-norm point of ``conv(V)``.

    Returns ``(point, support_indices, weights)``.
    """
    scale = max(1.0, float((V ** 2).sum(axis=1).max()))
    first = int(np.argmin((V ** 2).sum(axis=1)))
    S = [first]
    w = np.array([1.0])
    p = V[first].copy()
    for _ in range(maxiter):
        pp = p @ p
        if pp <= (1e-13 ** 2) * scale:
            break
        dots = V @ p
        k = int(np.argmin(dots))
        if pp - dots[k] <= tol * scale or k in S:
            break
        S.append(k)
        w = np.append(w, 0.0)
        while True:
            alpha = _affine_minimizer(V[S])
            if (alpha > 0).all():
                w = alpha
                break
            neg = np.flatnonzero(alpha <= 0)
            ratios = w[neg] / (w[neg] - alpha[neg])
            theta = ratios.min()
            w = theta * alpha + (1.0 - theta) * w
            w[neg[np.argmin(ratios)]] = 0.0
            w[w <= 1e-15] = 0.0
            S = [s for s, wi in zip(S, w) if wi > 0]
            w = w[w > 0]
            w = w / w.sum()
        p = w @ V[S]
    else:
        raise RuntimeError("nearest-point iteration did not converge")
    return p, S, w


def nearest_point(P, x):
    """Euclidean projection of ``x`` onto ``P`` and its distance.

    Uses Wolfe's minimum-norm-point iteration on the translated vertex set,
    stopping when the optimality gap ``|p|^2 - min_v <p, v>`` drops below
    1e-12 (relative to the squared vertex radius). A projection of norm below
    1e-13 is treated as zero, so interior points return ``(x, 0.0)``.

    Returns
    -------
    point : ndarray, shape (d,)
    distance : float
    """
    x = _as_point(x, P.dim)
    p, _, _ = _min_norm_point(P.vertices - x)
    dist = float(np.linalg.norm(p))
    scale = max(1.0, float(np.sqrt(((P.vertices - x) ** 2).sum(axis=1).max())))
    if dist <= 1e-13 * scale:
        return x.copy(), 0.0
    return x + p, dist


def contains(P, x, tol=0.0):
    """True when ``x`` lies within ``tol`` of ``P``."""
    if tol < 0:
        raise InputError(f"tolerance must be nonnegative, got {tol}")
    return nearest_point(P, x)[1] <= tol


def directed_hausdorff(A, B):
    """One-sided distance ``h*(A, B) = max_{a in A} d(a, B)``.

    Distance to a convex set is convex, so the max over ``conv(A)`` is
    attained at a vertex of ``A``.
    """
    _check_same_dim(A, B)
    return max(nearest_point(B, a)[1] for a in A.vertices)


def hausdorff(A, B):
    """Symmetric Hausdorff distance between two polytopes."""
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def _kronecker_alphas(d):
    # generalized golden ratio: unique positive root of x**(d+1) = x + 1
    phi = 2.0
    for _ in range(64):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    return phi ** -np.arange(1, d + 1)


def sphere_directions(dim, n, seed=0):
    """Deterministic quasi-uniform unit directions in R^dim.

    The first ``n`` directions of a fixed infinite sequence, so the sets are
    nested in ``n``. With ``seed=0`` the sequence starts at ``e_1``.

    * dim 1: alternating ``+1, -1``.
    * dim 2: golden-angle sequence on the circle.
    * dim >= 3: additive recurrence in the unit cube pushed through the
      inverse normal CDF and normalized.
    """
    if dim < 1 or n < 1:
        raise InputError("need dim >= 1 and n >= 1")
    k = np.arange(seed, seed + n, dtype=float)
    if dim == 1:
        return np.where(k % 2 == 0, 1.0, -1.0).reshape(-1, 1)
    if dim == 2:
        theta = 2.0 * np.pi * np.mod(k * _kronecker_alphas(1)[0], 1.0)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    u = np.mod(0.5 + np.outer(k, _kronecker_alphas(dim)), 1.0)
    z = ndtri(np.clip(u, 1e-16, 1.0 - 1e-16))
    norms = np.linalg.norm(z, axis=1)
    out = np.empty_like(z)
    ok = norms > 1e-12
    out[ok] = z[ok] / norms[ok, None]
    out[~ok] = np.eye(dim)[0]
    return out


def support_gap_sampled(A, B, n_dirs, seed=0):
    """Sampled lower bound on ``hausdorff(A, B)`` from support functions.

    Max of ``|c(f, A) - c(f, B)|`` over the first ``n_dirs`` directions of
    :func:`sphere_directions`.
    """
    _check_same_dim(A, B)
    if n_dirs < 1:
        raise InputError("n_dirs must be at least 1")
    F = sphere_directions(A.dim, n_dirs, seed)
    gaps = np.abs((A.vertices @ F.T).max(axis=0) - (B.vertices @ F.T).max(axis=0))
    return float(gaps.max())
