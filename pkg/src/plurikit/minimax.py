"""Weighted Tchebyshev polynomials by linear-programming minimax.

For a monic target ``x**alpha`` and the lower-order class ``P(alpha)``,
``solve_minimax`` minimizes ``max_i w_i**d |q(x_i)|`` over the sample set.
The design matrix is orthogonalized first (its column space is all the LP
sees), so the simplex works with an orthonormal basis no matter how badly
scaled the monomials are.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import InputError
from .geometry import WeightedSampleSet
from .polyalg import (
    Basis,
    Direction,
    MultiIndex,
    Poly,
    fitted_basis,
    direction_sequence,
    lower_order_basis,
    monomial_table,
)
from .simplex import minimax_lp
from .tolerances import POLYGON_SIDES, RANK_RTOL, SIGNIFICANT_ROW_FLOOR


@dataclass
class TchebyshevResult:
    alpha: MultiIndex
    poly: Poly  # monic in x**alpha, expressed in ``poly.basis``
    log_value: float  # log of max_i w_i**d |t_alpha(x_i)|
    solver_status: str  # optimal | iteration-limit | degenerate
    certificate_factor: float  # 1 on the real path, sec(pi/K) on the complex path
    log_lower_bound: float  # log of the LP dual value; the discrete optimum is >= it
    iterations: int
    cs_residual: float
    extra: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.alpha.degree

    @property
    def minimax_value(self) -> float:
        return math.exp(self.log_value)

    @property
    def lower_bound(self) -> float:
        return math.exp(self.log_lower_bound)

    @property
    def dth_root(self) -> float:
        return math.exp(self.log_value / self.degree)

    @cached_property
    def coefficients(self) -> dict:
        """Lower-order monomial coefficients ``{beta: c_beta}`` of the Tchebyshev polynomial."""
        mono = self.poly.to_monomial()
        return {b: c for b, c in mono.terms.items() if b != self.alpha}


def _weighted_design(E: WeightedSampleSet, columns, basis, d):
    act = E.active
    pts = E.points[act]
    if E.real_only:
        pts = pts.real
    A = monomial_table(pts, columns, basis)
    return A * (E.weights[act] ** d)[:, None]


def _orthonormal_range(A, tol=RANK_RTOL):
    """Orthonormal basis of range(A), rank-revealing when columns are dependent."""
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=A.dtype)
    norms = np.linalg.norm(A, axis=0)
    if A.shape[0] > A.shape[1] and np.all(norms > 0):
        Q, R = np.linalg.qr(A)
        sines = np.abs(np.diag(R)) / norms
        if sines.min() > tol * sines.max():
            return Q
    B = A[:, norms > 0] / norms[norms > 0]
    if B.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=A.dtype)
    U, sv, _ = np.linalg.svd(B, full_matrices=False)
    r = int(np.sum(sv > tol * sv[0])) if sv[0] > 0 else 0
    return U[:, :r]


def _lp_real(Qlow, h):
    n = Qlow.shape[0]
    G = np.vstack([Qlow, -Qlow])
    hh = np.concatenate([h, -h])
    anti = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    res = minimax_lp(G, hh, anti)
    return res.x.astype(float), res


def _lp_complex(Qlow, h, K):
    n, k = Qlow.shape
    phis = np.exp(-2j * np.pi * np.arange(K) / K)
    # row (i, k) encodes Re(e^{-i phi_k} (Qlow y + h)) with y = a + i b
    rot = phis[None, :, None] * Qlow[:, None, :]
    G = np.concatenate([rot.real, -rot.imag], axis=2).reshape(n * K, 2 * k)
    hh = (phis[None, :] * h[:, None]).real.reshape(n * K)
    ii, kk = np.divmod(np.arange(n * K), K)
    anti = ii * K + (kk + K // 2) % K
    res = minimax_lp(G, hh, anti)
    return res.x[:k] + 1j * res.x[k:], res


def _solve_lp(Qlow, h, real, K):
    if real:
        return _lp_real(Qlow.real, h.real)
    return _lp_complex(Qlow.astype(complex), h.astype(complex), K)


def _log(x):
    return math.log(float(x)) if x > 0 else -math.inf


@dataclass
class _Arnoldi1D:
    values: np.ndarray  # values[:, j] = pi_j(x) (unweighted) on the points
    H: np.ndarray  # H[:j, j] projections, H[j, j] normalizer
    logL: np.ndarray  # log of the x**j coefficient of pi_j


def _arnoldi_1d(x, s, jmax):
    """Polynomials ``pi_j`` of exact degree j with ``s * pi_j`` orthonormal on the points.

    Returns None when the points cannot separate degree ``jmax``.
    """
    n = x.shape[0]
    dtype = np.result_type(x, s, float)
    q = np.zeros((n, jmax + 1), dtype=dtype)
    vals = np.zeros((n, jmax + 1), dtype=dtype)
    H = np.zeros((jmax + 1, jmax + 1), dtype=dtype)
    logL = np.zeros(jmax + 1)
    ns = np.linalg.norm(s)
    q[:, 0] = s / ns
    vals[:, 0] = 1.0 / ns
    H[0, 0] = ns
    logL[0] = -math.log(ns)
    for j in range(1, jmax + 1):
        v = x * q[:, j - 1]
        v0 = np.linalg.norm(v)
        c = np.zeros(j, dtype=dtype)
        for _ in range(2):
            cc = q[:, :j].conj().T @ v
            v = v - q[:, :j] @ cc
            c += cc
        nv = np.linalg.norm(v)
        if not nv > RANK_RTOL * v0:
            return None
        q[:, j] = v / nv
        vals[:, j] = (x * vals[:, j - 1] - vals[:, :j] @ c) / nv
        H[:j, j] = c
        H[j, j] = nv
        logL[j] = logL[j - 1] - math.log(nv)
    return _Arnoldi1D(vals, H, logL)


def _monic_power_coefficients(arn: _Arnoldi1D) -> list:
    """Ascending power coefficients of ``pi_j / L_j`` (monic) for every j."""
    jmax = arn.H.shape[0] - 1
    out = [np.ones(1, dtype=arn.H.dtype)]
    for j in range(1, jmax + 1):
        row = np.zeros(j + 1, dtype=arn.H.dtype)
        row[1:] = out[j - 1]
        for i in range(j):
            row[: i + 1] -= arn.H[i, j] * math.exp(arn.logL[i] - arn.logL[j - 1]) * out[i]
        out.append(row)
    return out


def _basis_for_arnoldi(pts, real):
    b = fitted_basis(pts, "monomial")
    if real:
        b = Basis("monomial", tuple(float(np.real(c)) for c in b.center), b.scale)
    return b


def _solve_direct(E, alpha, lower, basis, d, K, real):
    """LP on the explicit design matrix of ``basis``.

    Handles fewer usable points than unknowns (the range of the lower block
    is rank-revealed) and caller-chosen bases.
    """
    A = _weighted_design(E, lower + [alpha], basis, d)
    A_low, a_top = A[:, :-1], A[:, -1]
    Qlow = _orthonormal_range(A_low)
    h = a_top - Qlow @ (Qlow.conj().T @ a_top)
    hmax = float(np.abs(h).max()) if h.size else 0.0
    iters, cs, dual = 0, 0.0, hmax
    y = np.zeros(Qlow.shape[1])
    if Qlow.shape[1] and hmax > 0:
        y, res = _solve_lp(Qlow, h, real, K)
        iters, cs, dual = res.iterations, res.slackness, res.dual_value
    target = Qlow @ y - (a_top - h)
    c_low = scipy.linalg.lstsq(A_low, target)[0] if A_low.shape[1] else np.zeros(0)
    if real:
        c_low = c_low.real
    lead = basis.leading(alpha)
    terms = {b: c / lead for b, c in zip(lower, c_low)}
    terms[alpha] = 1.0 / lead
    v = A_low @ c_low + a_top if A_low.shape[1] else a_top
    value = float(np.abs(v).max())
    return Poly(E.dim, terms, basis), _log(value) - _log(lead), _log(max(dual, 0.0)) - _log(lead), iters, cs


def solve_minimax(E: WeightedSampleSet, alpha, K: int = POLYGON_SIDES, basis: Basis | None = None) -> TchebyshevResult:
    """Weighted Tchebyshev polynomial ``t_alpha`` on E.

    Minimizes ``max_i w_i**d |q(x_i)|`` over ``q = x**alpha + sum_{beta in P(alpha)} c_beta x**beta``.
    Real sets use the exact LP with ``-u <= v_i <= u``; complex sets replace
    ``|v_i| <= u`` by K half-planes, and ``certificate_factor = sec(pi/K)``
    bounds the gap to the discrete optimum.  ``minimax_value`` is the sup
    norm of the LP's polynomial, evaluated in the orthonormal basis the LP
    works in; ``poly`` holds the same polynomial in (centered, scaled)
    power form, which is exact in exact arithmetic but loses digits to
    cancellation at high degree.
    """
    alpha = MultiIndex(alpha)
    if alpha.dim != E.dim:
        raise InputError(f"alpha has dimension {alpha.dim}, the set has {E.dim}")
    d = alpha.degree
    if d < 1:
        raise InputError("|alpha| must be >= 1")
    if K < 4 or K % 2:
        raise InputError("polygon side count K must be even and >= 4")
    lower = lower_order_basis(alpha)
    columns = lower + [alpha]
    act = E.active
    with np.errstate(divide="ignore"):
        logw = np.log(E.weights[act])
    logw_max = float(logw.max())
    keep = d * (logw - logw_max) >= math.log(SIGNIFICANT_ROW_FLOOR)
    pts = E.points[act]
    real = E.real_only
    if real:
        pts = pts.real
    if basis is None:
        basis = _basis_for_arnoldi(pts[keep], real)
    cert = 1.0 if real else 1.0 / math.cos(math.pi / K)

    info = {"points": int(pts.shape[0]), "unknowns": len(lower)}
    design = None
    if basis.kind == "monomial" and pts.shape[0] > len(lower):
        design = _tensor_arnoldi_design(pts, logw, logw_max, d, columns, basis, real)
    if design is None:
        poly, log_u, log_lb, iters, cs = _solve_direct(E, alpha, lower, basis, d, K, real)
        degenerate = pts.shape[0] <= len(lower) or basis.kind == "monomial"
        if not degenerate:
            degenerate = _orthonormal_range(_weighted_design(E, lower, basis, d)).shape[1] < len(lower)
        status = "degenerate" if degenerate else "optimal"
        info["basis"] = basis.kind
        return TchebyshevResult(alpha, poly, log_u, status, cert, log_lb, iters, abs(cs), info)

    A, logL, tables = design
    A_low, a_top = A[:, :-1], A[:, -1]
    if A_low.shape[1]:
        Qlow, Rlow = np.linalg.qr(A_low)
        proj = Qlow.conj().T @ a_top
        h = a_top - Qlow @ proj
        proj2 = Qlow.conj().T @ h
        h = h - Qlow @ proj2
        proj = proj + proj2
        y, res = _solve_lp(Qlow, h, real, K)
        status, iters, cs, dual = res.status, res.iterations, res.slackness, res.dual_value
        v = h + Qlow @ y
        c_low = scipy.linalg.solve_triangular(Rlow, y - proj)
    else:
        h = a_top
        status, iters, cs = "optimal", 0, 0.0
        v = h
        dual = float(np.abs(h).max())
        c_low = np.zeros(0)
    # x**alpha = h**alpha u**alpha + lower, so monic in x is h**alpha times monic in u
    log_scale = float(np.dot(alpha, np.log(np.asarray(basis.scale or np.ones(E.dim)))))
    log_shift = d * logw_max + log_scale - float(logL[-1])
    log_value = _log(float(np.abs(v).max())) + log_shift
    log_lb = _log(max(dual, 0.0)) + log_shift

    # expand sum_beta c_beta phi_beta + phi_alpha, divided by L_alpha, in powers of u
    mixing = np.concatenate([c_low * np.exp(logL[:-1] - logL[-1]), [1.0]])
    if real:
        mixing = mixing.real
    lead = basis.leading(alpha)
    coeffs = {}
    for beta, m in zip(columns, mixing):
        if m == 0:
            continue
        block = np.asarray(m)
        for k, j in enumerate(beta):
            block = np.multiply.outer(block, tables[k][j])
        for idx in zip(*np.nonzero(block)):
            coeffs[idx] = coeffs.get(idx, 0) + block[idx]
    poly = Poly(E.dim, {b: c / lead for b, c in coeffs.items()}, basis)
    return TchebyshevResult(
        alpha, poly, log_value, status, cert, log_lb, iters, abs(cs), dict(info, basis="arnoldi"),
    )


def _tensor_arnoldi_design(pts, logw, logw_max, d, columns, basis, real):
    """Weighted design in tensor products of per-coordinate Arnoldi polynomials.

    Each factor has exact degree, so the columns span the same space as the
    monomials on the lower set, but they are adapted to the weighted points
    and stay well conditioned where powers do not.  Returns None if some
    coordinate has too few distinct values for its degree.
    """
    dim = pts.shape[1]
    center = np.asarray(basis.center if basis.center is not None else np.zeros(dim))
    scale = np.asarray(basis.scale if basis.scale is not None else np.ones(dim))
    u = (pts - (center.real if real else center)) / scale
    s = np.exp(d * (logw - logw_max))
    facs, logLs, tables = [], [], []
    for k in range(dim):
        jmax = max(b[k] for b in columns)
        arn = _arnoldi_1d(u[:, k], s, jmax)
        if arn is None:
            return None
        facs.append(arn.values)
        logLs.append(arn.logL)
        tables.append(_monic_power_coefficients(arn))
    A = np.empty((pts.shape[0], len(columns)), dtype=np.result_type(*facs))
    logL = np.empty(len(columns))
    for col, beta in enumerate(columns):
        v = s.astype(A.dtype)
        for k, j in enumerate(beta):
            v = v * facs[k][:, j]
        A[:, col] = v
        logL[col] = sum(logLs[k][j] for k, j in enumerate(beta))
    if len(columns) > 1:
        norms = np.linalg.norm(A, axis=0)
        R = np.linalg.qr(A, mode="r")
        sines = np.abs(np.diag(R)) / norms
        if not sines.min() > RANK_RTOL * sines.max():
            return None
    return A, logL, tables


def tcheby_sequence(E: WeightedSampleSet, theta, j_values, K: int = POLYGON_SIDES, workers: int = 0):
    """Tchebyshev results along ``direction_sequence(theta, j)``.

    Returns one ``TchebyshevResult`` per j (in the given order); ``r.dth_root``
    traces the directional Tchebyshev constant.  ``workers > 0`` solves the
    j's concurrently; the output order does not depend on it.
    """
    js = [int(j) for j in j_values]
    if any(j < 1 for j in js):
        raise InputError("every j must be >= 1")
    if any(b <= a for a, b in zip(js, js[1:])):
        raise InputError("j values must be strictly ascending")
    theta = theta if isinstance(theta, Direction) else Direction(theta)
    if theta.dim != E.dim:
        raise InputError("direction and set dimensions differ")
    alphas = [direction_sequence(theta, j) for j in js]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda a: solve_minimax(E, a, K), alphas))
    return [solve_minimax(E, a, K) for a in alphas]


__all__ = ["TchebyshevResult", "solve_minimax", "tcheby_sequence"]
