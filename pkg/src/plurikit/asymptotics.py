"""Leading-coefficient asymptotics for compact sets and Freud-type weights.

For ``w(x) = exp(-H(x))`` with H a positive homogeneous polynomial of degree
gamma, the substitution ``x = s y`` with ``s = d**(1/gamma)`` turns the
degree-d orthogonality problem into one for the fixed weight
``exp(-H(y)/2)`` raised to the power d, up to the Jacobian ``s**N``:

    1/a_alpha = s**(d + N/2) * min ||exp(-d H(y)/2) q||_{L2(dy)}.

Everything here carries that constant exactly, so finite-j values can be
compared against closed forms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.special
import sympy

from .errors import ApproximationError, ConfigurationError, InputError, NumericalGuardError
from .extremal import green_weighted
from .geometry import Ball, DiscreteMeasure, WeightedSampleSet, build_grid_set, gauss_legendre_grid, uniform_measure
from .minimax import solve_minimax
from .orthopoly import orthonormalize
from .polyalg import Direction, MultiIndex, Poly, direction_sequence, eval_poly
from .tolerances import (
    CONTACT_TOL,
    HOMOGENEITY_RTOL,
    POLYGON_SIDES,
    QUADRATURE_RTOL,
    SPHERE_SAMPLES,
    TRUNCATION_R_MAX,
    TRUNCATION_STEP,
)


@dataclass(frozen=True, eq=False)
class FreudProblem:
    """Density ``exp(-H)`` (pointwise weight ``w = exp(-H/2)``), H positive and homogeneous of degree ``gamma``."""

    H: Poly
    gamma: int
    source: str = ""
    A: float = field(default=0.0)  # min of H/2 on the unit sphere

    @property
    def dim(self) -> int:
        return self.H.dim

    def H_values(self, y) -> np.ndarray:
        return eval_poly(self.H, np.atleast_2d(np.asarray(y, dtype=float))).real

    def weight(self, y) -> np.ndarray:
        """The scaled-problem weight ``exp(-H(y)/2)``."""
        return np.exp(-0.5 * self.H_values(np.asarray(y).real))


def _symbols_for(expr, dim):
    names = sorted(str(s) for s in expr.free_symbols)
    if dim is None:
        if names in ([], ["x"]):
            dim = 1
        else:
            idx = []
            for n in names:
                if not (n.startswith("x") and n[1:].isdigit() and int(n[1:]) >= 1):
                    raise ConfigurationError(f"unknown variable {n!r}; use x (one variable) or x1..xN")
                idx.append(int(n[1:]))
            dim = max(idx)
    if dim == 1 and names in ([], ["x"]):
        return [sympy.Symbol("x")]
    allowed = {f"x{k}" for k in range(1, dim + 1)}
    extra = set(names) - allowed
    if extra:
        raise ConfigurationError(f"unknown variables {sorted(extra)}; expected x1..x{dim}")
    return [sympy.Symbol(f"x{k}") for k in range(1, dim + 1)]


def _sphere_samples(dim, count, rng):
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    u = rng.standard_normal((count, dim))
    u /= np.linalg.norm(u, axis=1)[:, None]
    axes = np.vstack([np.eye(dim), -np.eye(dim)])
    return np.vstack([axes, u])


def parse_freud(text: str, dim: int | None = None, seed: int = 0) -> FreudProblem:
    """Parse ``H`` from text such as ``"x^2"`` or ``"x1^4 + x1^2*x2^2 + x2^4"``.

    Rejects anything that is not a real homogeneous polynomial positive away
    from the origin (``|x|`` included).
    """
    try:
        expr = sympy.parse_expr(
            text.replace("^", "**"), local_dict={"x": sympy.Symbol("x")}, evaluate=True
        )
    except Exception as exc:  # sympy raises a zoo of types on bad input
        raise ConfigurationError(f"cannot parse H = {text!r}: {exc}") from None
    syms = _symbols_for(expr, dim)
    try:
        sp = sympy.Poly(expr, *syms)
    except sympy.PolynomialError:
        raise ConfigurationError(f"H = {text!r} is not a polynomial; only polynomial H is supported") from None
    terms = {}
    for monom, coeff in sp.terms():
        c = complex(coeff)
        if c.imag != 0:
            raise ConfigurationError("H must have real coefficients")
        terms[MultiIndex(monom)] = c.real
    degrees = {sum(m) for m in terms}
    if len(degrees) != 1 or 0 in degrees:
        raise ConfigurationError(f"H = {text!r} is not homogeneous of positive degree")
    gamma = degrees.pop()
    H = Poly(len(syms), terms)
    fp = FreudProblem(H, gamma, text)
    rng = np.random.default_rng(seed)
    _check_homogeneity(fp, rng)
    u = _sphere_samples(fp.dim, SPHERE_SAMPLES, rng)
    hv = fp.H_values(u)
    if not np.all(hv > 0):
        raise ConfigurationError(f"H = {text!r} is not positive away from the origin")
    x = rng.standard_normal((50, fp.dim))
    if not np.all(fp.H_values(x) > 0):
        raise ConfigurationError(f"H = {text!r} is not positive away from the origin")
    return FreudProblem(H, gamma, text, float(hv.min()) / 2)


def _check_homogeneity(fp, rng):
    c = rng.uniform(0.1, 3.0, 20)
    x = rng.standard_normal((20, fp.dim))
    lhs = fp.H_values(c[:, None] * x)
    rhs = c**fp.gamma * fp.H_values(x)
    if np.any(np.abs(lhs - rhs) > HOMOGENEITY_RTOL * np.maximum(np.abs(rhs), 1e-300)):
        raise ConfigurationError("H failed the sampled homogeneity check")


def scale_problem(fp: FreudProblem, d: int) -> tuple[float, callable]:
    """Scale factor ``s = d**(1/gamma)`` and the scaled weight ``exp(-H(y)/2)``."""
    if d < 1:
        raise InputError("d must be >= 1")
    s = 1.0 if d == 1 else float(d) ** (1.0 / fp.gamma)
    return s, fp.weight


def log_tail_bound(fp: FreudProblem, d: int, R: float) -> float:
    """Log of ``|S^{N-1}| int_R^inf r^{N-1} (2r)^{2d} exp(-2 A d r^gamma) dr``.

    Bounds the mass of ``|q|**2 exp(-d H)`` outside the ball of radius R for a
    monic q whose zeros lie in that ball (``|q(y)| <= (2|y|)**d`` there).
    """
    N, g, A = fp.dim, fp.gamma, fp.A
    a = (N + 2 * d) / g
    x = 2 * A * d * R**g
    log_omega = math.log(2.0) + 0.5 * N * math.log(math.pi) - math.lgamma(0.5 * N)
    with np.errstate(divide="ignore"):
        log_q = float(np.log(scipy.special.gammaincc(a, x)))
    if not np.isfinite(log_q):  # deep tail: asymptotic x**(a-1) e^-x
        log_q = (a - 1) * math.log(x) - x - math.lgamma(a)
    return log_omega + 2 * d * math.log(2.0) - math.log(g) - a * math.log(2 * A * d) + math.lgamma(a) + log_q


def _radius_for(fp, d, log_target):
    k = 1
    while k * TRUNCATION_STEP <= TRUNCATION_R_MAX + 1e-12:
        R = round(k * TRUNCATION_STEP, 10)
        if log_tail_bound(fp, d, R) <= log_target:
            return R
        k += 1
    raise ConfigurationError(f"tail bound cannot reach the budget with R <= {TRUNCATION_R_MAX}")


def truncation_radius(fp: FreudProblem, d: int, tail_budget: float, l2_estimate: float | None = None,
                      nodes: int = 128) -> float:
    """Smallest R on a 0.1 grid with tail bound <= ``tail_budget * l2**2``.

    Without ``l2_estimate`` the L2 minimum is measured at a provisional radius
    (the one for ``l2 = 1``) and the search is repeated.
    """
    if not (0 < tail_budget < 1):
        raise InputError("tail_budget must lie in (0, 1)")
    if d < 1:
        raise InputError("d must be >= 1")
    if l2_estimate is None:
        nodes = max(nodes, d + 2)
        R0 = _radius_for(fp, d, math.log(tail_budget))
        alpha = MultiIndex((0,) * (fp.dim - 1) + (d,))
        l2_estimate = math.exp(-_log_leading_scaled(fp, d, alpha, R0, nodes)[0])
    return _radius_for(fp, d, math.log(tail_budget) + 2 * math.log(l2_estimate))


def _log_leading_scaled(fp, d, alpha, R, nodes):
    """``(log a_scaled, condition)`` on tensor Gauss-Legendre nodes over [-R, R]^N."""
    E, mu = gauss_legendre_grid([-R] * fp.dim, [R] * fp.dim, nodes, fp.weight)
    o = orthonormalize(E, mu, d)
    return math.log(o.leading[MultiIndex(alpha)]), o.condition_estimate


@dataclass
class AsymptoticsReport:
    theta: Direction
    js: list
    alphas: list
    lhs: np.ndarray  # a^{1/d} (compact form) or a^{1/d} d^{1/gamma} (Freud form)
    rhs_trace: np.ndarray  # 1 / (Tchebyshev d-th root)
    log_a: np.ndarray  # log of the leading coefficient in the original coordinates
    condition: np.ndarray
    radius: np.ndarray = field(default_factory=lambda: np.zeros(0))
    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    stopped: str = ""  # reason for a partial trace, empty when complete

    @property
    def gap(self) -> np.ndarray:
        return np.abs(self.lhs - self.rhs_trace)

    @property
    def a(self) -> np.ndarray:
        return np.exp(self.log_a)

    @property
    def degrees(self) -> list:
        return [a.degree for a in self.alphas]


def _check_js(js):
    js = [int(j) for j in js]
    if not js or any(j < 1 for j in js) or any(b <= a for a, b in zip(js, js[1:])):
        raise InputError("js must be ascending positive integers")
    return js


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _assemble(theta, js, rows, extra_cols=()):
    k = next((i for i, r in enumerate(rows) if isinstance(r, Exception)), len(rows))
    stopped = f"{type(rows[k]).__name__}: {rows[k]}" if k < len(rows) else ""
    width = 5 + len(extra_cols)
    cols = list(zip(*rows[:k])) if k else [()] * width
    return AsymptoticsReport(
        theta, js[:k], list(cols[0]), np.array(cols[1], dtype=float), np.array(cols[2], dtype=float),
        np.array(cols[3], dtype=float), np.array(cols[4], dtype=float),
        *(np.array(cols[5 + i]) for i in range(len(extra_cols))), stopped=stopped,
    )


def run_theorem41(E: WeightedSampleSet, mu: DiscreteMeasure, theta, js, K: int = POLYGON_SIDES,
                  workers: int = 0) -> AsymptoticsReport:
    """``a^{1/d}`` from the L2 problem against ``1/T^{1/d}`` from the minimax problem.

    The two traces share a limit when (E, w, mu) has the weighted Bernstein-Markov
    property; that hypothesis cannot be checked from samples.
    """
    theta = theta if isinstance(theta, Direction) else Direction(theta)
    if theta.dim != E.dim:
        raise InputError("direction and sample set dimensions differ")
    js = _check_js(js)

    def one(j):
        alpha = direction_sequence(theta, j)
        d = alpha.degree
        try:
            o = orthonormalize(E, mu, d)
            t = solve_minimax(E, alpha, K)
        except NumericalGuardError as exc:
            return exc
        log_a = math.log(o.leading[alpha])
        return alpha, math.exp(log_a / d), 1.0 / t.dth_root, log_a, o.condition_estimate

    rows = _map(one, js, workers)
    return _assemble(theta, js, rows)


@dataclass(frozen=True)
class GridSpec:
    nodes: int = 64  # starting Gauss-Legendre nodes per axis; doubled until stable
    max_nodes: int = 2048
    resolution: int = 801  # minimax grid points per axis on the ball
    tail_budget: float = 1e-10
    radius: float | None = None  # fixed radius instead of the tail-bound search


def _converged_leading(fp, d, alpha, R, grid):
    n = max(grid.nodes, 2 * d + 2)
    prev, cond = _log_leading_scaled(fp, d, alpha, R, n)
    while True:
        n2 = 2 * n
        if n2 > grid.max_nodes:
            raise ApproximationError(
                f"quadrature did not settle to {QUADRATURE_RTOL} with {grid.max_nodes} nodes per axis at d = {d}"
            )
        cur, cond = _log_leading_scaled(fp, d, alpha, R, n2)
        if abs(math.expm1(cur - prev)) < QUADRATURE_RTOL:
            return cur, cond, n2
        prev, n = cur, n2


def run_example41(fp: FreudProblem, theta, js, grid_spec: GridSpec | None = None, K: int = POLYGON_SIDES,
                  workers: int = 0) -> AsymptoticsReport:
    """``a^{1/d} d^{1/gamma}`` against ``1/tau`` of ``exp(-H/2)`` on a ball grid.

    The L2 problem uses tensor Gauss-Legendre quadrature on the box
    ``[-R, R]^N`` (which contains the ball of the same radius, so the tail
    bound still applies); nodes double until the leading coefficient moves
    by less than ``QUADRATURE_RTOL``.
    """
    grid = grid_spec or GridSpec()
    theta = theta if isinstance(theta, Direction) else Direction(theta)
    if theta.dim != fp.dim:
        raise InputError("direction and H dimensions differ")
    js = _check_js(js)
    N = fp.dim

    def one(j):
        alpha = direction_sequence(theta, j)
        d = alpha.degree
        s, weight = scale_problem(fp, d)
        try:
            R = grid.radius if grid.radius is not None else truncation_radius(fp, d, grid.tail_budget)
            log_a_scaled, cond, n = _converged_leading(fp, d, alpha, R, grid)
            Eb = build_grid_set(Ball(R, N), grid.resolution, weight)
            t = solve_minimax(Eb, alpha, K)
        except NumericalGuardError as exc:
            return exc
        log_a = log_a_scaled - (d + 0.5 * N) * math.log(s)
        return alpha, math.exp(log_a / d) * s, 1.0 / t.dth_root, log_a, cond, R, n

    rows = _map(one, js, workers)
    return _assemble(theta, js, rows, extra_cols=("radius", "nodes"))


def hermite_log_leading(n: int) -> float:
    """Log leading coefficient of the degree-n orthonormal polynomial for ``exp(-x**2) dx``."""
    return 0.5 * n * math.log(2.0) - 0.5 * math.lgamma(n + 1) - 0.25 * math.log(math.pi)


@dataclass
class ContactSet:
    points: np.ndarray
    mask: np.ndarray  # over the samples of E
    gap: np.ndarray  # Q - V on the samples (inf where w = 0)
    tol: float


def estimate_contact_set(E: WeightedSampleSet, d_max: int = 16, tol: float = CONTACT_TOL,
                         mu: DiscreteMeasure | None = None) -> ContactSet:
    """Samples where the weighted Green approximant comes within ``tol`` of Q.

    A heuristic locator of the support of the weighted equilibrium measure:
    extremal weighted polynomials peak there, which is where the lower
    approximant meets Q.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    g = green_weighted(E, mu if mu is not None else uniform_measure(E), d_max)
    gap = np.full(len(E), np.inf)
    act = E.active
    gap[act] = E.Q[act] - g(E.points[act])
    mask = gap <= tol
    return ContactSet(E.points[mask], mask, gap, tol)


__all__ = [
    "FreudProblem", "parse_freud", "scale_problem", "log_tail_bound", "truncation_radius", "AsymptoticsReport",
    "run_theorem41", "GridSpec", "run_example41", "hermite_log_leading", "ContactSet", "estimate_contact_set",
]
