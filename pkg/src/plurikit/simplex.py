"""Dense two-phase simplex.

Standard form: minimize ``c @ x`` subject to ``A @ x = b``, ``x >= 0``.
The basis matrix is refactorized from scratch at every iteration, which
costs little at the sizes used here (a few dozen rows) and keeps the
iterates free of accumulated update error.  Pricing is Dantzig's rule with
Bland's smallest-index rule as the anti-cycling fallback; both are
deterministic, so repeated runs give identical pivot sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SolverError
from .tolerances import SIMPLEX_MAX_ITER, SIMPLEX_STALL_LIMIT, SIMPLEX_TOL

_STALL_LIMIT = SIMPLEX_STALL_LIMIT


@dataclass
class LPResult:
    status: str  # "optimal" | "iteration-limit" | "infeasible" | "unbounded"
    x: np.ndarray
    duals: np.ndarray  # multipliers y with A.T @ y <= c at optimum
    objective: float
    iterations: int
    basis: np.ndarray


def _iterate(A, b, c, basis, allowed, max_iter, tol, it0=0):
    """Run simplex iterations from a feasible basis.  Returns (status, basis, iterations).

    Entering columns are priced by Dantzig's rule; after a run of
    degenerate pivots the smallest-index (Bland) rule takes over until the
    objective moves again, which rules out cycling.
    """
    m, n = A.shape
    cscale = float(np.abs(c[allowed]).max()) if np.any(allowed) else 1.0
    cscale = cscale if cscale > 0 else 1.0
    it = it0
    stall = 0
    while it < max_iter:
        B = A[:, basis]
        xB = np.linalg.solve(B, b)
        y = np.linalg.solve(B.T, c[basis])
        reduced = c - A.T @ y
        reduced[basis] = 0.0
        cand = np.flatnonzero(allowed & (reduced < -tol * cscale))
        if cand.size == 0:
            return "optimal", basis, it
        j = cand[0] if stall >= _STALL_LIMIT else cand[np.argmin(reduced[cand])]
        u = np.linalg.solve(B, A[:, j])
        pos = u > tol * max(1.0, float(np.abs(u).max()))
        if not np.any(pos):
            return "unbounded", basis, it
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(xB[pos], 0.0) / u[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        leave = ties[np.argmin(basis[ties])]
        stall = stall + 1 if best <= tol else 0
        basis = basis.copy()
        basis[leave] = j
        it += 1
    return "iteration-limit", basis, it


def _feasible_basis(A, b, basis, tol):
    if basis is None or len(basis) != A.shape[0]:
        return False
    B = A[:, basis]
    if np.linalg.cond(B) > 1e12:
        return False
    xB = np.linalg.solve(B, b)
    return bool(np.all(xB >= -tol * max(1.0, float(np.abs(xB).max()))))


def solve_standard_form(c, A, b, basis=None, max_iter: int = SIMPLEX_MAX_ITER,
                        tol: float = SIMPLEX_TOL) -> LPResult:
    """Solve the standard-form LP.

    ``basis`` optionally names a primal-feasible starting basis; phase 1 is
    skipped when it checks out.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    if basis is not None:
        basis = np.asarray(basis, dtype=int)
        if _feasible_basis(A, b, basis, tol):
            allowed = np.ones(n, dtype=bool)
            status, basis, it = _iterate(A, b, c, basis, allowed, max_iter, tol)
            return _result(status, A, b, c, basis, n, it, np.arange(m), flip)

    # phase 1: artificial slack per row
    A1 = np.hstack([A, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = np.arange(n, n + m)
    allowed = np.ones(n + m, dtype=bool)
    status, basis, it = _iterate(A1, b, c1, basis, allowed, max_iter, tol)
    if status == "iteration-limit":
        return _result(status, A1, b, c1, basis, n, it, np.arange(m), flip)
    xB = np.linalg.solve(A1[:, basis], b)
    infeas = float(np.sum(xB[basis >= n]))
    if infeas > tol * max(1.0, float(np.abs(b).max())) * 1e3:
        return LPResult("infeasible", np.zeros(n), np.zeros(m), np.inf, it, basis)

    # drive artificials out of the basis; drop rows that turn out redundant
    rows = np.arange(m)
    while True:
        art = np.flatnonzero(basis >= n)
        if art.size == 0:
            break
        r = art[0]
        Binv_row = np.linalg.solve(A1[np.ix_(rows, basis)].T, np.eye(len(rows))[r])
        alpha = Binv_row @ A[rows]
        alpha[basis[basis < n]] = 0.0
        big = float(np.abs(alpha).max()) if alpha.size else 0.0
        if big > 1e3 * tol:
            basis = basis.copy()
            basis[r] = int(np.argmax(np.abs(alpha)))
        else:
            rows = np.delete(rows, r)
            basis = np.delete(basis, r)

    A2 = A[rows]
    b2 = b[rows]
    allowed = np.ones(n, dtype=bool)
    status, basis, it = _iterate(A2, b2, c, basis, allowed, max_iter, tol, it0=it)
    return _result(status, A2, b2, c, basis, n, it, rows, flip, full_m=m)


def _result(status, A, b, c, basis, n, it, rows, flip, full_m=None):
    full_m = full_m or len(rows)
    B = A[:, basis]
    xB = np.linalg.solve(B, b)
    x = np.zeros(A.shape[1])
    x[basis] = np.maximum(xB, 0.0)
    y_rows = np.linalg.solve(B.T, c[basis])
    y = np.zeros(full_m)
    y[rows] = y_rows
    y[flip] *= -1
    return LPResult(status, x[:n], y, float(c[:n] @ x[:n]) if len(c) >= n else np.nan, it, basis)


@dataclass
class MinimaxLP:
    """Solution of ``min_x max_j (G[j] @ x + h[j])``."""

    x: np.ndarray
    value: float  # primal value max_j (G x + h)
    dual_value: float  # h @ y, a lower bound on the optimum
    weights: np.ndarray  # dual y >= 0, sums to 1
    status: str
    iterations: int
    slackness: float  # sum_j y_j (value - G_j x - h_j), relative


def _reference_basis(A, antipode):
    """Pick n+1 well-conditioned columns, then flip signs to make y >= 0."""
    from scipy.linalg import qr

    m = A.shape[0]
    _, _, piv = qr(A, mode="economic", pivoting=True)
    basis = piv[:m].copy()
    e = np.zeros(m)
    e[-1] = 1.0
    try:
        y = np.linalg.solve(A[:, basis], e)
    except np.linalg.LinAlgError:
        return None
    neg = y < 0
    basis[neg] = antipode[basis[neg]]
    return basis


def minimax_lp(G, h, antipode=None, max_iter: int = SIMPLEX_MAX_ITER,
               tol: float = SIMPLEX_TOL) -> MinimaxLP:
    """Discrete minimax via its dual.

    The dual ``max h @ y  s.t.  G.T @ y = 0, sum(y) = 1, y >= 0`` is in
    standard form with one row per free variable plus one; its simplex
    multipliers are the primal minimizer.  When the rows come in pairs
    ``G[antipode[j]] == -G[j]``, a feasible starting basis is built directly
    (a Remez-style reference) and phase 1 is skipped.
    """
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float)
    J, n = G.shape
    if J == 0 or h.shape != (J,):
        raise InputError("minimax needs at least one row and one offset per row")
    A = np.vstack([G.T, np.ones((1, J))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    hscale = float(np.abs(h).max()) or 1.0
    start = None if antipode is None else _reference_basis(A, np.asarray(antipode))
    res = solve_standard_form(-h / hscale, A, b, basis=start, max_iter=max_iter, tol=tol)
    res.duals = res.duals * hscale
    if res.status in ("infeasible", "unbounded"):
        raise SolverError(f"minimax dual LP reported {res.status}; this indicates a bug")
    x = res.duals[:n]
    r = G @ x + h
    value = float(r.max())
    y = res.x
    dual_value = float(h @ y)
    scale = max(abs(value), np.abs(h).max(), 1e-300)
    slack = float(y @ (value - r)) / scale
    return MinimaxLP(x, value, dual_value, y, res.status, res.iterations, slack)
