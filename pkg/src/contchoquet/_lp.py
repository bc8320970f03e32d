"""Small dense two-phase simplex solver.

Sized for the feasibility and margin problems that come up on polytopes with
at most a few hundred vertices in dimension <= 10. The calling convention
mirrors ``scipy.optimize.linprog``::

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                lo <= x <= hi

Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
degenerate pivots, so cycling cannot occur.
"""
from dataclasses import dataclass

import numpy as np

FEASIBILITY_TOL = 1e-9
OPTIMALITY_TOL = 1e-9
_PIVOT_TOL = 1e-11
_BLAND_AFTER = 20


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None
    fun: float
    nit: int

    @property
    def success(self):
        return self.status == "optimal"


def _pivot(T, row, col):
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _run_simplex(T, basis, n_active, maxiter):
    """Iterate on tableau ``T`` in place; the last row holds reduced costs.

    Only the first ``n_active`` columns may enter the basis.
    Returns ``(status, iterations)``.
    """
    m = T.shape[0] - 1
    degenerate_run = 0
    for it in range(maxiter):
        costs = T[-1, :n_active]
        if degenerate_run >= _BLAND_AFTER:
            candidates = np.flatnonzero(costs < -OPTIMALITY_TOL)
            if candidates.size == 0:
                return "optimal", it
            col = int(candidates[0])
        else:
            col = int(np.argmin(costs))
            if costs[col] >= -OPTIMALITY_TOL:
                return "optimal", it
        column = T[:m, col]
        positive = column > _PIVOT_TOL
        if not positive.any():
            return "unbounded", it
        ratios = np.full(m, np.inf)
        ratios[positive] = T[:m, -1][positive] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + _PIVOT_TOL)
        row = int(ties[np.argmin(basis[ties])])
        _pivot(T, row, col)
        basis[row] = col
        degenerate_run = degenerate_run + 1 if best <= _PIVOT_TOL else 0
    raise RuntimeError(f"simplex did not terminate in {maxiter} iterations")


def _standardize(c, A_ub, b_ub, A_eq, b_eq, bounds):
    """Rewrite variables as ``x = M @ y + shift`` with ``y >= 0``.

    Finite upper bounds become extra inequality rows.
    """
    n = c.size
    if bounds is None:
        bounds = [(0.0, None)] * n
    elif len(bounds) == 2 and not np.iterable(bounds[0]):
        bounds = [tuple(bounds)] * n
    columns, shift = [], np.zeros(n)
    extra_rows, extra_rhs = [], []
    for j, (lo, hi) in enumerate(bounds):
        lo = -np.inf if lo is None else float(lo)
        hi = np.inf if hi is None else float(hi)
        if lo > hi:
            raise ValueError(f"variable {j} has empty bounds [{lo}, {hi}]")
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(lo):
            shift[j] = lo
            columns.append(e)
            if np.isfinite(hi):
                row = np.zeros(n)
                row[j] = 1.0
                extra_rows.append(row)
                extra_rhs.append(hi)
        elif np.isfinite(hi):
            shift[j] = hi
            columns.append(-e)
        else:
            columns.append(e)
            columns.append(-e)
    M = np.array(columns).T

    ub_rows = [] if A_ub is None else list(np.atleast_2d(A_ub))
    ub_rhs = [] if b_ub is None else list(np.atleast_1d(b_ub))
    ub_rows += extra_rows
    ub_rhs += extra_rhs
    A_ub = np.array(ub_rows, dtype=float).reshape(-1, n)
    b_ub = np.array(ub_rhs, dtype=float)
    if A_eq is None:
        A_eq = np.zeros((0, n))
        b_eq = np.zeros(0)
    else:
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        b_eq = np.atleast_1d(np.asarray(b_eq, dtype=float))
    return (M, shift, A_ub @ M, b_ub - A_ub @ shift,
            A_eq @ M, b_eq - A_eq @ shift)


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None,
            maxiter=10_000):
    """Solve a small dense linear program.

    Parameters
    ----------
    c : array_like, shape (n,)
        Objective coefficients (minimized).
    A_ub, b_ub : array_like, optional
        Inequality constraints ``A_ub @ x <= b_ub``.
    A_eq, b_eq : array_like, optional
        Equality constraints.
    bounds : sequence of (lo, hi), optional
        Per-variable bounds; ``None`` means unbounded on that side.
        Defaults to ``x >= 0``.

    Returns
    -------
    LPResult
    """
    c = np.asarray(c, dtype=float).ravel()
    M, shift, Aub, bub, Aeq, beq = _standardize(c, A_ub, b_ub, A_eq, b_eq,
                                                bounds)
    n_y = M.shape[1]
    m_ub, m_eq = Aub.shape[0], Aeq.shape[0]
    m = m_ub + m_eq

    # [y | slacks] columns, then artificials where no slack can start basic
    A = np.zeros((m, n_y + m_ub))
    A[:m_ub, :n_y] = Aub
    A[:m_ub, n_y:] = np.eye(m_ub)
    A[m_ub:, :n_y] = Aeq
    b = np.concatenate([bub, beq])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    n_struct = A.shape[1]
    basis = np.empty(m, dtype=int)
    art_rows = []
    for i in range(m):
        if i < m_ub and not flip[i]:
            basis[i] = n_y + i
        else:
            art_rows.append(i)
    n_art = len(art_rows)
    T = np.zeros((m + 1, n_struct + n_art + 1))
    T[:m, :n_struct] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n_struct + k] = 1.0
        basis[i] = n_struct + k

    nit = 0
    scale = 1.0 + (np.abs(b).max() if m else 0.0)
    if n_art:
        T[-1, :] = 0.0
        for i in art_rows:
            T[-1, :] -= T[i, :]
        T[-1, n_struct:n_struct + n_art] = 0.0
        status, it = _run_simplex(T, basis, n_struct + n_art, maxiter)
        nit += it
        if -T[-1, -1] > FEASIBILITY_TOL * scale:
            return LPResult("infeasible", None, np.nan, nit)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = np.ones(m + 1, dtype=bool)
        for i in range(m):
            if basis[i] >= n_struct:
                cand = np.flatnonzero(np.abs(T[i, :n_struct]) > _PIVOT_TOL)
                if cand.size:
                    _pivot(T, i, int(cand[0]))
                    basis[i] = int(cand[0])
                else:
                    keep[i] = False
        T = np.delete(T[keep], np.s_[n_struct:n_struct + n_art], axis=1)
        basis = basis[keep[:m]]
        m = basis.size

    cost = np.concatenate([c @ M, np.zeros(m_ub)])
    T[-1, :] = 0.0
    T[-1, :n_struct] = cost
    for i in range(m):
        T[-1, :] -= cost[basis[i]] * T[i, :]
    status, it = _run_simplex(T, basis, n_struct, maxiter)
    nit += it
    if status == "unbounded":
        return LPResult("unbounded", None, -np.inf, nit)
    y = np.zeros(n_struct)
    y[basis] = T[:m, -1]
    x = M @ y[:n_y] + shift
    return LPResult("optimal", x, float(c @ x), nit)
