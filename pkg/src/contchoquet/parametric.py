"""Parametric polytope families ``t -> P(t)`` on a closed interval.

Includes Hausdorff continuity audits, the quantitative lower-semicontinuity
audit of ``t -> ext P(t)``, and extreme-point tracking through slices cut by
an exposing functional.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._lp import linprog
from .exceptions import DomainError, InputError
from .geometry import (Polytope, _as_point, extreme_points, hausdorff,
                       lexsorted, support)

ARGMAX_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ParametricBody:
    """A polytope-valued map on ``[lo, hi]``.

    ``evaluator`` must return a reduced polytope of fixed dimension.
    ``lipschitz``, when set, is a bound on ``h(P(s), P(t)) / |s - t|``.
    """

    evaluator: Callable[[float], Polytope]
    domain: tuple[float, float]
    dim: int
    lipschitz: float | None = None
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = map(float, self.domain)
        if not lo <= hi:
            raise InputError(f"empty parameter domain [{lo}, {hi}]")
        object.__setattr__(self, "domain", (lo, hi))
        if self.lipschitz is not None and self.lipschitz < 0:
            raise InputError("Lipschitz bound must be nonnegative")


def evaluate(F, t):
    """``P(t)`` as a reduced polytope."""
    t = float(t)
    lo, hi = F.domain
    if not lo <= t <= hi:
        raise InputError(f"t={t!r} outside the domain [{lo}, {hi}]")
    return F.evaluator(t)


def _polyval(coeffs, t):
    out = np.zeros_like(coeffs[0], dtype=float)
    for c in reversed(coeffs):
        out = out * t + c
    return out


def affine_family(base, A_coeffs, b_coeffs, domain=(0.0, 1.0), lipschitz=None):
    """``P(t) = A(t) K0 + b(t)`` with polynomial ``A`` and ``b``.

    ``A_coeffs[k]`` and ``b_coeffs[k]`` multiply ``t**k``. When ``A(t)`` is
    invertible the image of the reduced base is already reduced; otherwise
    extreme points are recomputed.
    """
    K0 = extreme_points(base)
    d = K0.dim
    A_coeffs = [np.asarray(a, dtype=float).reshape(d, d) for a in A_coeffs]
    b_coeffs = [np.asarray(b, dtype=float).reshape(d) for b in b_coeffs]

    def evaluator(t):
        A = _polyval(A_coeffs, t)
        V = K0.vertices @ A.T + _polyval(b_coeffs, t)
        if abs(np.linalg.det(A)) > 1e-12:
            return Polytope(lexsorted(V), is_reduced=True)
        return extreme_points(V)

    return ParametricBody(evaluator, domain, d, lipschitz, "affine",
                          {"base": K0.vertices, "A": A_coeffs, "b": b_coeffs})


def constant_family(base, domain=(0.0, 1.0)):
    K0 = extreme_points(base)
    F = affine_family(K0.vertices, [np.eye(K0.dim)], [np.zeros(K0.dim)],
                      domain, lipschitz=0.0)
    return ParametricBody(F.evaluator, F.domain, F.dim, 0.0, "constant",
                          {"base": K0.vertices})


def translation_family(base, velocity, domain=(0.0, 1.0)):
    """``P(t) = K0 + t * velocity``; Lipschitz constant ``|velocity|``."""
    velocity = _as_point(velocity)
    d = velocity.size
    return affine_family(base, [np.eye(d)], [np.zeros(d), velocity], domain,
                         lipschitz=float(np.linalg.norm(velocity)))


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotation_family(base, rate=np.pi / 2, domain=(0.0, 1.0), center=(0.0, 0.0)):
    """Planar rotation of ``base`` by angle ``rate * t`` about ``center``.

    Declared Lipschitz bound: ``|rate| * max_v |v - center|`` (vertex arc
    speed bounds the Hausdorff speed).
    """
    K0 = extreme_points(base)
    if K0.dim != 2:
        raise InputError("rotation_family needs a planar base polytope")
    center = _as_point(center, 2)
    offsets = K0.vertices - center
    radius = float(np.linalg.norm(offsets, axis=1).max())

    def evaluator(t):
        V = offsets @ _rotation(rate * t).T + center
        return Polytope(lexsorted(V), is_reduced=True)

    return ParametricBody(evaluator, domain, 2, abs(rate) * radius, "rotation",
                          {"base": K0.vertices, "rate": rate, "center": center})


def vertex_interpolation(breakpoints, vertex_sets, lipschitz=None):
    """Each listed point follows a piecewise-linear path between breakpoints.

    ``vertex_sets[k]`` is an ``(n, d)`` array of the points at
    ``breakpoints[k]``. ``P(t)`` is the hull of the interpolated points; a
    point that enters the hull stops being a vertex, which
    :func:`lsc_ext_audit` reports. Default Lipschitz bound: fastest point
    speed, which bounds the Hausdorff speed of the hull.
    """
    ts = np.asarray(breakpoints, dtype=float)
    paths = np.asarray(vertex_sets, dtype=float)
    if ts.ndim != 1 or ts.size < 1 or (np.diff(ts) <= 0).any():
        raise InputError("breakpoints must be strictly increasing")
    if paths.ndim != 3 or paths.shape[0] != ts.size:
        raise InputError("need one (n, d) point array per breakpoint")
    if lipschitz is None:
        if ts.size == 1:
            lipschitz = 0.0
        else:
            speeds = np.linalg.norm(np.diff(paths, axis=0), axis=2).max(axis=1)
            lipschitz = float((speeds / np.diff(ts)).max())

    def evaluator(t):
        k = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0,
                        max(ts.size - 2, 0)))
        if ts.size == 1:
            return extreme_points(paths[0])
        s = (t - ts[k]) / (ts[k + 1] - ts[k])
        return extreme_points((1 - s) * paths[k] + s * paths[k + 1])

    return ParametricBody(evaluator, (ts[0], ts[-1]), paths.shape[2], lipschitz,
                          "vertex_interpolation",
                          {"breakpoints": ts, "paths": paths})


def _check_grid(F, grid):
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size < 1:
        raise InputError("grid is empty")
    if (np.diff(grid) < 0).any():
        raise InputError("grid must be sorted")
    lo, hi = F.domain
    if grid[0] < lo or grid[-1] > hi:
        raise InputError("grid leaves the parameter domain")
    return grid


@dataclass
class ContinuityRow:
    t_left: float
    t_right: float
    hausdorff: float
    modulus: float
    passed: bool | None


@dataclass
class ContinuityReport:
    rows: list[ContinuityRow]
    lipschitz: float | None

    @property
    def passed(self):
        """All pairs within bound, or None when no bound was declared."""
        if self.lipschitz is None:
            return None
        return all(r.passed for r in self.rows)

    @property
    def max_modulus(self):
        return max((r.modulus for r in self.rows), default=0.0)


def continuity_audit(F, grid, tol=1e-9):
    """Hausdorff distance and empirical modulus on adjacent grid pairs.

    A pair passes when ``h <= (Lip + tol) * dt``; without a declared
    Lipschitz bound the report is informational.
    """
    grid = _check_grid(F, grid)
    bodies = [evaluate(F, t) for t in grid]
    rows = []
    for i in range(grid.size - 1):
        dt = grid[i + 1] - grid[i]
        h = hausdorff(bodies[i], bodies[i + 1])
        modulus = h / dt if dt > 0 else (0.0 if h == 0 else np.inf)
        passed = None
        if F.lipschitz is not None:
            passed = bool(h <= (F.lipschitz + tol) * dt)
        rows.append(ContinuityRow(grid[i], grid[i + 1], h, modulus, passed))
    return ContinuityReport(rows, F.lipschitz)


def exposing_direction(P, e):
    """Unit functional exposing vertex ``e`` of ``P``, with its margin.

    Solves ``max s`` subject to ``<f, e - v> >= s`` for every other vertex
    and ``f`` in the unit cube, then picks the least-l1 ``f`` achieving that
    margin so the answer is canonical. The returned margin is
    ``min_v <f0, e - v>`` for the normalized ``f0``.

    Raises
    ------
    DomainError
        If ``e`` is not a vertex of ``P``.
    """
    e = _as_point(e, P.dim)
    V = P.vertices
    match = np.flatnonzero(np.abs(V - e).max(axis=1) <= 1e-12)
    if match.size == 0:
        raise DomainError(f"{e.tolist()} is not a vertex of the polytope")
    others = np.delete(V, match, axis=0)
    d = P.dim
    if others.shape[0] == 0:
        return np.eye(d)[0], np.inf
    D = e - others
    n = D.shape[0]
    # variables: f (d), s
    A_ub = np.hstack([-D, np.ones((n, 1))])
    res = linprog(np.r_[np.zeros(d), -1.0], A_ub=A_ub, b_ub=np.zeros(n),
                  bounds=[(-1.0, 1.0)] * d + [(None, None)])
    best = -res.fun
    if not best > 1e-12:
        raise DomainError(f"{e.tolist()} is not an exposed vertex")
    # variables: f (d), u (d) with u >= |f|
    target = best - 1e-9 * max(1.0, best)
    A2 = np.vstack([
        np.hstack([-D, np.zeros((n, d))]),
        np.hstack([np.eye(d), -np.eye(d)]),
        np.hstack([-np.eye(d), -np.eye(d)]),
    ])
    b2 = np.r_[-target * np.ones(n), np.zeros(2 * d)]
    res2 = linprog(np.r_[np.zeros(d), np.ones(d)], A_ub=A2, b_ub=b2,
                   bounds=[(-1.0, 1.0)] * d + [(0.0, None)] * d)
    f = res2.x[:d] if res2.success else res.x[:d]
    f0 = f / np.linalg.norm(f)
    return f0, float((D @ f0).min())


def _argmax_vertex(P, f):
    """Index of the maximizing vertex; ties within 1e-12 go to the
    lexicographically smallest vertex."""
    values = P.vertices @ f
    tied = np.flatnonzero(values >= values.max() - ARGMAX_TIE_TOL)
    if tied.size == 1:
        return int(tied[0])
    order = np.lexsort(P.vertices[tied].T[::-1])
    return int(tied[order[0]])


@dataclass
class Track:
    """Output of :func:`track_extreme_point`.

    ``slice_gaps[n] = c(f0, P(t_n)) - <f0, a_n>``: the point ``a_n`` lies in
    every slice ``R_gamma(t_n)`` with ``gamma`` above this value.
    """

    direction: np.ndarray
    margin: float
    ts: np.ndarray
    points: np.ndarray
    slice_gaps: np.ndarray


def track_extreme_point(F, t0, e0, ts):
    """Follow vertex ``e0`` of ``P(t0)`` to nearby parameters.

    For each ``t_n`` the tracked point is the vertex of ``P(t_n)`` maximizing
    the functional that exposes ``e0`` in ``P(t0)``. The argmax lies in every
    nonempty slice cut by that functional, so it is a canonical choice of an
    extreme point inside the slices.
    """
    P0 = evaluate(F, t0)
    f0, margin = exposing_direction(P0, e0)
    ts = np.asarray(ts, dtype=float).ravel()
    points = np.empty((ts.size, F.dim))
    gaps = np.empty(ts.size)
    for n, t in enumerate(ts):
        P = evaluate(F, t)
        a = P.vertices[_argmax_vertex(P, f0)]
        points[n] = a
        gaps[n] = support(P, f0) - a @ f0
    return Track(f0, margin, ts, points, gaps)


@dataclass
class LscRow:
    t_left: float
    t_right: float
    max_shift: float
    worst_vertex: np.ndarray
    bound: float
    passed: bool


@dataclass
class LscReport:
    rows: list[LscRow]
    tol_slope: float

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def failures(self):
        return [r for r in self.rows if not r.passed]

    @property
    def max_shift(self):
        return max((r.max_shift for r in self.rows), default=0.0)


def lsc_ext_audit(F, grid, tol_slope):
    """Quantitative lower-semicontinuity check of ``t -> ext P(t)``.

    For each adjacent pair, every vertex of ``P(t_i)`` must have a vertex of
    ``P(t_{i+1})`` within ``tol_slope * dt``.
    """
    grid = _check_grid(F, grid)
    bodies = [evaluate(F, t) for t in grid]
    rows = []
    for i in range(grid.size - 1):
        A, B = bodies[i], bodies[i + 1]
        d = np.sqrt(((A.vertices[:, None, :] - B.vertices[None, :, :]) ** 2)
                    .sum(-1)).min(axis=1)
        k = int(np.argmax(d))
        bound = tol_slope * (grid[i + 1] - grid[i])
        rows.append(LscRow(grid[i], grid[i + 1], float(d[k]), A.vertices[k],
                           bound, bool(d[k] <= bound + 1e-12)))
    return LscReport(rows, tol_slope)
