"""Selections of a parametric polytope and of its representing-measure map.

The measure-valued part follows the classical Michael recipe on an interval:
charts ``(t_a - r_a, t_a + r_a)`` carrying witness measures, a partition of
unity of tent functions subordinated to them, and the blended family
``l_delta(t) = sum_a e_a(t) mu_a``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import CoverError, InputError, RefinementError
from .geometry import _as_point, hausdorff, nearest_point
from .measures import (DiscreteMeasure, RepresentingMeasureConstraint,
                       representation_gap, supported_on_extremes, mixture,
                       weak_star_distance)
from .parametric import evaluate
from .representation import choquet_witness, repair_witness

PROJECTION_TOL = 1e-10
RADIUS_TOL = 1e-6
MAX_DOUBLINGS = 12
SCAN_STEPS = 16


# --- point-valued selections ---------------------------------------------

@dataclass
class EpsilonSelection:
    """Piecewise-linear ``p_eps`` with its audit on a 10x denser grid."""

    eps: float
    breakpoints: np.ndarray
    values: np.ndarray
    audit_ts: np.ndarray
    audit_distances: np.ndarray

    def __call__(self, t):
        return np.array([np.interp(t, self.breakpoints, self.values[:, k])
                         for k in range(self.values.shape[1])])

    @property
    def passed(self):
        return bool((self.audit_distances < self.eps).all())

    @property
    def max_distance(self):
        return float(self.audit_distances.max())


def _refine_by_modulus(F, grid, eps, max_depth=30):
    """Breakpoints with ``h(P(s), P(t)) < eps / 2`` between neighbours."""
    if F.lipschitz is not None:
        if F.lipschitz == 0:
            return grid
        step = 0.5 * eps / F.lipschitz
        out = [grid[0]]
        for a, b in zip(grid[:-1], grid[1:]):
            k = int(np.floor((b - a) / step)) + 1
            out.extend(np.linspace(a, b, k + 1)[1:])
        return np.array(out)
    out = [grid[0]]
    for a, b in zip(grid[:-1], grid[1:]):
        stack = [(a, b, 0)]
        while stack:
            lo, hi, depth = stack.pop()
            if hausdorff(evaluate(F, lo), evaluate(F, hi)) < 0.5 * eps:
                out.append(hi)
            elif depth >= max_depth:
                raise RefinementError(
                    f"no Lipschitz bound and h stays >= eps/2 on [{lo}, {hi}]")
            else:
                mid = 0.5 * (lo + hi)
                stack += [(mid, hi, depth + 1), (lo, mid, depth + 1)]
    return np.array(out)


def _dense(grid, factor=10):
    pieces = [np.linspace(a, b, factor + 1)[:-1]
              for a, b in zip(grid[:-1], grid[1:])]
    return np.concatenate(pieces + [grid[-1:]])


def michael_epsilon_selection(F, eps, grid, x0=None, max_rounds=8):
    """Continuous ``p_eps`` with ``d(p_eps(t), P(t)) < eps`` everywhere.

    The grid is refined until neighbouring breakpoints have Hausdorff gap
    below ``eps / 2`` (from the declared Lipschitz bound, or by bisection
    when none is declared). The value at each breakpoint is the projection of
    the previous value (the first projects ``x0``, default the vertex mean of
    the first body); between breakpoints the values are interpolated
    linearly. The result is audited on a 10x denser grid and failing
    intervals are split again.

    Raises
    ------
    RefinementError
        When no refinement reaches the target.
    """
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps}")
    grid = np.unique(np.asarray(grid, dtype=float))
    lo, hi = F.domain
    if grid[0] < lo or grid[-1] > hi:
        raise InputError("grid leaves the parameter domain")
    breakpoints = _refine_by_modulus(F, grid, eps)
    if x0 is None:
        x0 = evaluate(F, breakpoints[0]).vertices.mean(axis=0)
    x = _as_point(x0, F.dim)
    for _ in range(max_rounds):
        values = np.empty((breakpoints.size, F.dim))
        for i, t in enumerate(breakpoints):
            x = nearest_point(evaluate(F, t), x)[0]
            values[i] = x
        x = values[0]
        if breakpoints.size == 1:
            audit = breakpoints.copy()
        else:
            audit = _dense(breakpoints)
        sel = EpsilonSelection(eps, breakpoints, values, audit, np.empty(0))
        dist = np.array([nearest_point(evaluate(F, t), sel(t))[1]
                         for t in audit])
        sel.audit_distances = dist
        if sel.passed:
            return sel
        bad = np.unique(np.searchsorted(breakpoints, audit[dist >= eps]))
        mids = [0.5 * (breakpoints[k - 1] + breakpoints[k])
                for k in bad if 0 < k < breakpoints.size]
        breakpoints = np.unique(np.concatenate([breakpoints, mids]))
    raise RefinementError(f"eps-selection audit still fails after "
                          f"{max_rounds} refinements (max distance "
                          f"{sel.max_distance:.3g})")


@dataclass
class ProjectionSelection:
    """``p(t)``: nearest point of ``P(t)`` to a fixed reference point."""

    family: object
    x_ref: np.ndarray

    def __call__(self, t):
        return nearest_point(evaluate(self.family, t), self.x_ref)[0]


def continuous_selection(F, x_ref):
    """Metric projection of ``x_ref`` onto ``P(t)``, a continuous selection."""
    return ProjectionSelection(F, _as_point(x_ref, F.dim))


@dataclass
class StabilityRow:
    t_left: float
    t_right: float
    step: float
    bound: float
    membership_gap: float
    passed: bool


def selection_audit(F, p, grid):
    """Membership and projection-stability audit of a projection selection.

    For projections of one point ``x`` onto convex ``A`` and ``B`` with
    Hausdorff distance ``h``, ``|P_A x - P_B x|^2 <= h (d(x, A) + d(x, B))``.
    Each adjacent grid pair is checked against that bound, and each value is
    checked to lie in its body within 1e-10.
    """
    grid = np.asarray(grid, dtype=float)
    bodies = [evaluate(F, t) for t in grid]
    values = [p(t) for t in grid]
    member = [nearest_point(P, v)[1] for P, v in zip(bodies, values)]
    reach = [nearest_point(P, p.x_ref)[1] for P in bodies]
    rows = []
    for i in range(grid.size - 1):
        h = hausdorff(bodies[i], bodies[i + 1])
        step = float(np.linalg.norm(values[i + 1] - values[i]))
        bound = h * (reach[i] + reach[i + 1])
        gap = max(member[i], member[i + 1])
        rows.append(StabilityRow(grid[i], grid[i + 1], step, bound, gap,
                                 bool(step ** 2 <= bound + 1e-12
                                      and gap <= PROJECTION_TOL)))
    return rows


# --- covers, partitions of unity, l_delta -------------------------------

@dataclass(frozen=True, eq=False)
class Chart:
    center: float
    radius: float
    witness: DiscreteMeasure


@dataclass
class CoverWithWitnesses:
    charts: list[Chart]
    domain: tuple[float, float]
    refinements: int = 0

    def with_radii(self, scale):
        """Copy with every radius multiplied by ``scale``."""
        charts = [Chart(c.center, c.radius * scale, c.witness)
                  for c in self.charts]
        return CoverWithWitnesses(charts, self.domain, self.refinements)


def cover_gaps(charts, domain):
    """Closed sub-intervals of ``domain`` missed by the open charts.

    A shared endpoint of two touching charts comes back as a zero-length gap.
    """
    lo, hi = domain
    intervals = sorted((c.center - c.radius, c.center + c.radius)
                       for c in charts if c.radius > 0)
    gaps = []
    cur = lo  # smallest point not yet known to be covered
    for left, right in intervals:
        if cur > hi:
            break
        if right <= cur:
            continue
        if left >= cur:
            gaps.append((cur, min(left, hi)))
        cur = right
    if cur <= hi:
        gaps.append((cur, hi))
    return gaps


@dataclass
class PartitionOfUnity:
    """Normalized tent functions ``max(0, r_a - |t - t_a|)``."""

    centers: np.ndarray
    radii: np.ndarray

    def __call__(self, t):
        raw = np.maximum(0.0, self.radii - np.abs(t - self.centers))
        total = raw.sum()
        if total <= 0:
            raise InputError(f"t={t!r} is not covered by any chart")
        return raw / total


def partition_of_unity(cover):
    return PartitionOfUnity(np.array([c.center for c in cover.charts]),
                            np.array([c.radius for c in cover.charts]))


def l_delta(cover, pou, t):
    """``sum_a e_a(t) mu_a`` over the charts containing ``t``."""
    lo, hi = cover.domain
    if not lo <= t <= hi:
        raise InputError(f"t={t!r} outside the domain [{lo}, {hi}]")
    weights = pou(t)
    active = np.flatnonzero(weights > 0)
    if active.size == 1:
        return cover.charts[active[0]].witness
    return mixture([cover.charts[a].witness for a in active], weights[active])


def _constraint(F, p, t, gamma, ext_tol):
    return RepresentingMeasureConstraint(evaluate(F, t), p(t), gamma, ext_tol)


def _chart_radius(F, p, center, spacing, witness, gamma, delta, fam, N,
                  ext_tol):
    """Largest certified radius ``<= spacing`` for a chart at ``center``.

    A parameter ``t`` is certified when repairing the witness at ``t`` moves
    it less than ``delta / 2`` in the weak* metric. Each side is scanned
    outward in ``SCAN_STEPS`` steps; the first failing step is bracketed by
    bisection down to ``RADIUS_TOL``.
    """
    lo, hi = F.domain

    def ok(t):
        if not lo <= t <= hi:
            return True
        nu = repair_witness(witness, _constraint(F, p, t, gamma, ext_tol))
        return weak_star_distance(witness, nu, fam, N) < 0.5 * delta

    radius = spacing
    for sign in (1.0, -1.0):
        if not ok(center + sign * min(RADIUS_TOL, spacing)):
            return 0.0
        step = spacing / SCAN_STEPS
        inner = 0.0
        for k in range(1, SCAN_STEPS + 1):
            r = k * step
            if r >= radius:
                break
            if ok(center + sign * r):
                inner = r
                continue
            a, b = inner, r
            while b - a > RADIUS_TOL:
                m = 0.5 * (a + b)
                if ok(center + sign * m):
                    a = m
                else:
                    b = m
            radius = min(radius, a)
            break
    return radius


def build_cover(F, p, gamma, delta, fam, N, init_grid, ext_tol=1e-9,
                max_doublings=MAX_DOUBLINGS):
    """Charts with witnesses covering the parameter domain.

    Every grid point ``t_a`` gets the witness ``choquet_witness`` of
    ``p(t_a)`` in ``P(t_a)`` and the largest radius (at most the grid spacing
    of its refinement level) over which the repaired witness stays within
    weak* distance ``delta / 2``. Grid intervals that meet an uncovered gap
    are split in half, at most ``max_doublings`` times.

    Raises
    ------
    CoverError
        If gaps remain after the last refinement; ``worst_t`` is the centre
        of the largest gap.
    """
    if not (gamma > 0 and delta > 0):
        raise InputError("gamma and delta must be positive")
    if not 2.0 ** -N < delta / 4:
        raise InputError(f"N={N} too small: need 2**-N < delta/4")
    lo, hi = F.domain
    grid = np.unique(np.asarray(init_grid, dtype=float))
    if grid.size == 0 or grid[0] < lo or grid[-1] > hi:
        raise InputError("init_grid must be a nonempty subset of the domain")
    spacing = (hi - lo) if grid.size == 1 else float(np.diff(grid).max())
    if spacing <= 0:
        spacing = 1.0

    def make_chart(t, spacing):
        c = _constraint(F, p, t, gamma, ext_tol)
        witness = choquet_witness(c)
        r = _chart_radius(F, p, t, spacing, witness, gamma, delta, fam, N,
                          ext_tol)
        return Chart(float(t), r, witness)

    charts = [make_chart(t, spacing) for t in grid]
    points = list(grid)
    for level in range(max_doublings + 1):
        gaps = cover_gaps(charts, (lo, hi))
        if not gaps:
            kept = [c for c in charts if c.radius > 0]
            return CoverWithWitnesses(sorted(kept, key=lambda c: c.center),
                                      (lo, hi), level)
        if level == max_doublings:
            break
        spacing *= 0.5
        pts = np.array(sorted(points))
        new = set()
        for a, b in gaps:
            for left, right in zip(pts[:-1], pts[1:]):
                if right >= a and left <= b:
                    new.add(0.5 * (left + right))
            if pts.size == 1 or a < pts[0] or b > pts[-1]:
                # gap beyond the outermost points: add points toward the ends
                if a < pts[0]:
                    new.add(max(lo, pts[0] - spacing))
                if b > pts[-1]:
                    new.add(min(hi, pts[-1] + spacing))
        new -= set(points)
        charts += [make_chart(t, spacing) for t in sorted(new)]
        points += sorted(new)
    worst = max(gaps, key=lambda g: g[1] - g[0])
    raise CoverError(
        f"charts fail to cover [{lo}, {hi}] after {max_doublings} doublings; "
        f"largest gap [{worst[0]:.9g}, {worst[1]:.9g}]",
        worst_t=0.5 * (worst[0] + worst[1]))


@dataclass
class DeltaRow:
    t: float
    chart_weights: dict
    distance: float
    barycenter_gap: float
    supported: bool
    passed: bool


@dataclass
class DeltaSelectionReport:
    rows: list[DeltaRow]
    witnesses: list[DiscreteMeasure]
    measures: list[DiscreteMeasure]
    delta: float
    modulus: float

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def max_distance(self):
        return max(r.distance for r in self.rows)


def verify_delta_selection(F, p, cover, pou, gamma, delta, fam, N, audit_grid,
                           ext_tol=1e-9, jobs=1):
    """Certify ``l_delta`` as a delta-selection on ``audit_grid``.

    At each ``t``: ``mu = l_delta(t)``, ``nu = repair_witness(mu, .)`` is a
    member of ``L(t)``, and the point passes when the weak* distance from
    ``mu`` to ``nu`` (an upper bound on the distance to ``L(t)``) is below
    ``delta``. Also reports the largest weak* difference quotient of
    ``t -> l_delta(t)`` over adjacent audit points.
    """
    ts = np.asarray(audit_grid, dtype=float)

    def check(t):
        mu = l_delta(cover, pou, t)
        c = _constraint(F, p, t, gamma, ext_tol)
        nu = repair_witness(mu, c)
        dist = weak_star_distance(mu, nu, fam, N)
        weights = pou(t)
        sparse = {int(a): float(weights[a]) for a in np.flatnonzero(weights)}
        gap = representation_gap(nu, c.target)
        supported = supported_on_extremes(nu, c.body, ext_tol)
        passed = dist < delta and gap < gamma and supported
        return mu, nu, DeltaRow(float(t), sparse, dist, gap, supported, passed)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(check, ts))
    else:
        results = [check(t) for t in ts]
    measures = [r[0] for r in results]
    modulus = 0.0
    for i in range(ts.size - 1):
        dt = ts[i + 1] - ts[i]
        if dt > 0:
            step = weak_star_distance(measures[i], measures[i + 1], fam, N)
            modulus = max(modulus, step / dt)
    return DeltaSelectionReport([r[2] for r in results],
                                [r[1] for r in results], measures, delta,
                                modulus)
