"""Representing measures supported on the vertices of a polytope."""
import numpy as np

from .exceptions import DomainError, InputError
from .geometry import _as_point, in_hull, nearest_point, support
from .measures import DiscreteMeasure, barycenter, in_L, mixture

MEMBERSHIP_TOL = 1e-9
BLEND_TOL = 1e-9
_DROP_WEIGHT = 1e-12


def _strip_affine_dependence(V, lam):
    """Reduce a convex combination to at most ``d + 1`` affinely independent
    points, keeping the represented point fixed.

    Each step moves along a null vector of ``[V_S^T; 1]`` until a weight hits
    zero; ties go to the lowest index.
    """
    d = V.shape[1]
    S = np.flatnonzero(lam > _DROP_WEIGHT)
    lam = lam[S]
    while S.size > d + 1:
        M = np.vstack([V[S].T, np.ones(S.size)])
        z = np.linalg.svd(M)[2][-1]
        if not (z > 0).any():
            z = -z
        pos = np.flatnonzero(z > 1e-14)
        ratios = lam[pos] / z[pos]
        step = ratios.min()
        leaving = pos[np.flatnonzero(ratios <= step * (1 + 1e-12))[0]]
        lam = lam - step * z
        lam[leaving] = 0.0
        keep = lam > _DROP_WEIGHT
        S, lam = S[keep], lam[keep]
    return S, lam


def _polish(V, S, lam, x):
    """Re-solve the barycentric system on the support for full precision."""
    A = np.vstack([V[S].T, np.ones(S.size)])
    sol = np.linalg.lstsq(A, np.append(x, 1.0), rcond=None)[0]
    if (sol >= 0).all():
        lam = sol
    keep = lam > _DROP_WEIGHT
    S, lam = S[keep], lam[keep]
    return S, lam / lam.sum()


def caratheodory_measure(P, x):
    """Measure on at most ``d + 1`` vertices of ``P`` with barycenter ``x``.

    A feasibility LP over all vertices gives a first representation, which
    is then reduced by affine-dependence pivoting. The result is one valid
    witness among many.

    Raises
    ------
    DomainError
        If ``x`` is farther than 1e-9 from ``P``; ``certificate`` holds a unit
        direction separating ``x`` from ``P``.
    """
    x = _as_point(x, P.dim)
    proj, dist = nearest_point(P, x)
    if dist > MEMBERSHIP_TOL:
        f = (x - proj) / dist
        raise DomainError(
            f"point lies at distance {dist:.3g} outside the polytope "
            f"(separating margin {f @ x - support(P, f):.3g})", certificate=f)
    target = proj if dist > 0 else x
    V = P.vertices
    lam = in_hull(V, target)
    if lam is None:
        raise DomainError("membership LP infeasible for a contained point")
    S, lam = _strip_affine_dependence(V, np.clip(lam, 0.0, None))
    S, lam = _polish(V, S, lam, target)
    return DiscreteMeasure(V[S], lam)


def choquet_witness(c):
    """A member of ``L`` for constraint ``c`` (exact Caratheodory measure)."""
    return caratheodory_measure(c.body, c.target)


def transport_to_extremes(mu, P):
    """Move every atom to its nearest vertex of ``P``; weights are kept.

    Returns
    -------
    measure : DiscreteMeasure
    snap : float
        Largest distance any atom moved; bounds the barycenter shift.
    """
    if mu.dim != P.dim:
        raise InputError("dimension mismatch")
    d2 = ((mu.atoms[:, None, :] - P.vertices[None, :, :]) ** 2).sum(-1)
    nearest = d2.argmin(axis=1)
    snap = float(np.sqrt(d2[np.arange(len(mu)), nearest].max()))
    return DiscreteMeasure(P.vertices[nearest], mu.weights), snap


def repair_witness(mu, c, full_output=False):
    """Land ``mu`` inside ``L`` with as little change as possible.

    Atoms are transported to the nearest vertices. If the barycenter gap
    then reaches ``gamma``, the transported measure is blended with
    :func:`choquet_witness` using the smallest weight (bisection to 1e-9)
    that restores gamma-representation.

    Parameters
    ----------
    mu : DiscreteMeasure
    c : RepresentingMeasureConstraint
    full_output : bool
        Also return the blend weight.

    Returns
    -------
    measure : DiscreteMeasure
    blend : float
        Only when ``full_output`` is true.
    """
    if in_L(mu, c):
        return (mu, 0.0) if full_output else mu
    moved, _ = transport_to_extremes(mu, c.body)
    if in_L(moved, c):
        return (moved, 0.0) if full_output else moved
    exact = choquet_witness(c)
    b_moved, b_exact = barycenter(moved), barycenter(exact)

    def ok(w):
        gap = np.linalg.norm((1 - w) * b_moved + w * b_exact - c.target)
        return gap < c.gamma

    lo, hi = 0.0, 1.0
    while hi - lo > BLEND_TOL:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    out = mixture([moved, exact], [1.0 - hi, hi])
    while not in_L(out, c):
        # rounding in the atom sums can undo a borderline bisection result
        hi = min(1.0, hi + BLEND_TOL)
        out = mixture([moved, exact], [1.0 - hi, hi]) if hi < 1.0 else exact
    return (out, hi) if full_output else out
