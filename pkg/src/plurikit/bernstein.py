"""Bernstein-Markov diagnostics, degree splitting on the lift, and the
polynomial surrogate for a continuous weight.

B-M is an asymptotic statement with an unknown constant, so ``bm_trace``
only reports sup/L2 ratios and their d-th roots; it never returns a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ApproximationError, InputError, PreconditionError
from .geometry import CircularSample, DiscreteMeasure, WeightedSampleSet, check_same_support
from .minimax import solve_minimax
from .orthopoly import orthonormalize
from .polyalg import (
    Poly,
    dehomogenize,
    eval_homogeneous,
    eval_poly,
    fitted_basis,
    homogeneous_parts,
    lower_order_basis,
    monomial_table,
    monomials_upto,
)
from .tolerances import SURROGATE_MAX_DEGREE

FAMILIES = ("orthonormal", "tchebyshev", "random-monic")


@dataclass
class BMTrace:
    degrees: list
    ratios: np.ndarray  # per degree, max over the family of sup / L2
    dth_roots: np.ndarray
    family: str
    l2_check: np.ndarray = field(default_factory=lambda: np.zeros(0))  # orthonormal family: max |L2 - 1|


def _weighted_norms(E, mu, values, d):
    wv = (E.weights**d) * np.abs(values)
    return float(wv.max()), float(np.sqrt(np.sum(mu.masses * wv**2)))


def _ratio(sup, l2):
    # a polynomial vanishing on E has sup = L2 = 0; count it as ratio 1
    return 1.0 if sup == 0 and l2 == 0 else sup / l2


def bm_trace(E: WeightedSampleSet, mu: DiscreteMeasure, d_list, family: str = "orthonormal", seed: int = 0) -> BMTrace:
    """Sup/L2 ratios of weighted polynomials of each degree in ``d_list``.

    ``orthonormal``: every ``p_alpha`` with ``|alpha| = d`` (L2 norm 1);
    ``tchebyshev``: the weighted Tchebyshev polynomial of every such alpha;
    ``random-monic``: ``x**alpha`` plus seeded standard-normal lower terms.
    """
    check_same_support(E, mu)
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    degrees = [int(d) for d in d_list]
    if any(d < 1 for d in degrees):
        raise InputError("degrees must be >= 1")
    pts = E.points.real if E.real_only else E.points
    rng = np.random.default_rng(seed)
    ratios, l2dev = [], []
    for d in degrees:
        alphas = [a for a in monomials_upto(E.dim, d) if a.degree == d]
        best, dev = 0.0, 0.0
        if family == "orthonormal":
            o = orthonormalize(E, mu, d)
            for a in alphas:
                v = o.weighted_values(a)
                sup = float(np.abs(v).max())
                l2 = float(np.sqrt(np.sum(mu.masses * np.abs(v) ** 2)))
                dev = max(dev, abs(l2 - 1.0))
                best = max(best, sup / l2)
        else:
            for a in alphas:
                if family == "tchebyshev":
                    p = solve_minimax(E, a).poly
                else:
                    terms = {b: rng.standard_normal() for b in lower_order_basis(a)}
                    terms[a] = 1.0
                    p = Poly(E.dim, terms)
                best = max(best, _ratio(*_weighted_norms(E, mu, eval_poly(p, pts), d)))
        ratios.append(best)
        l2dev.append(dev)
    ratios = np.array(ratios)
    roots = ratios ** (1.0 / np.array(degrees, dtype=float))
    return BMTrace(degrees, ratios, roots, family, np.array(l2dev) if family == "orthonormal" else np.zeros(0))


@dataclass
class SplitReport:
    total_sq: float  # ||p||^2 in L2(nu)
    parts_sq: dict  # degree -> ||p_i||^2 in L2(nu)
    pythagoras_residual: float  # relative
    l2_lift: dict  # degree -> (||P_i||_{L2(nu)}, ||w^i G_i||_{L2(mu)}, relative residual)

    @property
    def max_residual(self) -> float:
        return max([self.pythagoras_residual] + [r for _, _, r in self.l2_lift.values()])


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def homogeneous_split_check(Z: CircularSample, nu: DiscreteMeasure, p: Poly, m: int | None = None,
                            mu: DiscreteMeasure | None = None) -> SplitReport:
    """Pythagoras across homogeneous degrees on the lift, and the L2 lift identity per degree.

    Needs ``m > 2 deg p`` circle points: the discrete circle average kills
    ``t**a conj(t)**b`` for ``0 < |a - b| < m`` only.  ``mu`` defaults to the
    base measure recovered from ``nu`` (circle masses summed).
    """
    m = Z.circle_points if m is None else int(m)
    if m != Z.circle_points:
        raise InputError(f"m = {m} does not match the sample's {Z.circle_points} circle points")
    if p.dim != Z.dim:
        raise InputError("p must be a polynomial in (t, z_1..z_N)")
    deg = p.degree
    if m <= 2 * deg:
        raise PreconditionError(
            f"m = {m} circle points cannot separate degree-{deg} parts; need m >= 2*deg + 1 = {2 * deg + 1}"
        )
    if nu.points.shape != Z.samples.shape or not np.array_equal(nu.points, Z.samples):
        raise InputError("nu must live on the samples of Z")
    base = Z.base
    act = np.flatnonzero(base.active)
    if mu is None:
        masses = np.zeros(len(base))
        np.add.at(masses, Z.base_index, nu.masses)
        base_masses = masses[act]
    else:
        check_same_support(base, mu)
        base_masses = mu.masses[act]

    p = p.to_monomial()
    S = Z.samples
    total = float(np.sum(nu.masses * np.abs(eval_poly(p, S)) ** 2))
    parts = homogeneous_parts(p)
    parts_sq, l2_lift = {}, {}
    lam = base.points[act]
    w = base.weights[act]
    for i, P in parts.items():
        lhs_sq = float(np.sum(nu.masses * np.abs(eval_homogeneous(P, S)) ** 2))
        parts_sq[i] = lhs_sq
        G = dehomogenize(P)
        rhs_sq = float(np.sum(base_masses * (w**i * np.abs(eval_poly(G, lam))) ** 2))
        l2_lift[i] = (math.sqrt(lhs_sq), math.sqrt(rhs_sq), _rel(math.sqrt(lhs_sq), math.sqrt(rhs_sq)))
    resid = _rel(total, math.fsum(parts_sq.values()))
    return SplitReport(total, parts_sq, resid, l2_lift)


@dataclass
class Surrogate:
    H: Poly  # truncated exponential series of g
    g: Poly  # least-squares fit of log w
    fit_degree: int
    terms: int  # K: H = sum_{k <= K} g**k / k!
    fit_error: float  # max_E |log w - g|
    band: tuple  # (min, max) of w / H over the samples
    eps: float


def _lstsq_fit(E, target, k, basis):
    columns = monomials_upto(E.dim, k)
    A = monomial_table(E.points.real, columns, basis)
    Q, R = np.linalg.qr(A)
    c = np.linalg.solve(R, Q.T @ target) if R.shape[0] else np.zeros(0)
    return Poly(E.dim, dict(zip(columns, c)), basis), A @ c


def weierstrass_surrogate(E: WeightedSampleSet, eps: float) -> Surrogate:
    """Polynomial H with ``1 - 2 eps <= w / H <= 1 + 2 eps`` on the samples.

    Fits ``g ~ log w`` by least squares (uniform weights on E) with increasing
    degree until ``max |log w - g| <= eps``, then takes the shortest partial
    sum of ``exp(g)`` whose band lies in ``[1 - 2 eps, 1 + 2 eps]`` and
    contains 1.
    """
    if not E.real_only:
        raise InputError("the surrogate construction needs a real sample set")
    if not (0 < eps < 0.1):
        raise InputError("eps must lie in (0, 0.1)")
    if np.any(E.weights <= 0):
        raise InputError("the weight must be strictly positive on E")
    basis = fitted_basis(E.points.real, "monomial")
    logw = np.log(E.weights)
    g = fit = None
    for k in range(SURROGATE_MAX_DEGREE + 1):
        if len(monomials_upto(E.dim, k)) > len(E):
            break
        g, fit = _lstsq_fit(E, logw, k, basis)
        err = float(np.abs(logw - fit).max())
        if err <= eps:
            break
    else:
        k = SURROGATE_MAX_DEGREE + 1
    if g is None or err > eps:
        raise ApproximationError(
            f"log w could not be fitted to within {eps} by polynomials of degree <= {min(k, SURROGATE_MAX_DEGREE)}"
        )
    pts = E.points.real
    g_vals = eval_poly(g, pts).real
    H = Poly(E.dim, {(0,) * E.dim: 1.0}, basis)
    power = H
    H_vals = np.ones(len(E))
    term_vals = np.ones(len(E))
    for K in range(0, 200):
        if K > 0:
            power = power * g * (1.0 / K)
            H = H + power
            term_vals = term_vals * g_vals / K
            H_vals = H_vals + term_vals
        ratio = E.weights / H_vals
        lo, hi = float(ratio.min()), float(ratio.max())
        if np.all(H_vals > 0) and 1 - 2 * eps <= lo <= 1 <= hi <= 1 + 2 * eps:
            # certify with the polynomial itself, not the running sums
            ratio = E.weights / eval_poly(H, pts).real
            lo, hi = float(ratio.min()), float(ratio.max())
            if 1 - 2 * eps <= lo <= 1 <= hi <= 1 + 2 * eps:
                return Surrogate(H, g, k, K, err, (lo, hi), eps)
    raise ApproximationError("exponential series did not reach the certified band")


@dataclass
class Sandwich:
    num: float  # ||w^d q||_E
    den: float  # || |H|^d q ||_E
    lo_d: float  # band[0] ** d
    hi_d: float  # band[1] ** d

    @property
    def ratio(self) -> float:
        return self.num / self.den

    @property
    def holds(self) -> bool:
        """``lo^d den <= num <= hi^d den``, compared without a division."""
        return self.lo_d * self.den <= self.num <= self.hi_d * self.den


def sandwich_ratio(E: WeightedSampleSet, s: Surrogate, q: Poly, d: int) -> Sandwich:
    """``||w^d q||_E`` against ``|| |H|^d q ||_E`` with the band raised to the d-th power.

    The numerator is evaluated as ``(w/H)**d * (|H|**d |q|)`` pointwise, the
    same ``w/H`` values that define the band, so the bound holds in floating
    point and not only in exact arithmetic.
    """
    pts = E.points.real if E.real_only else E.points
    qv = np.abs(eval_poly(q, pts))
    Hv = eval_poly(s.H, pts).real
    base = np.abs(Hv) ** d * qv
    num = float(np.max((E.weights / Hv) ** d * base))
    den = float(np.max(base))
    lo, hi = s.band
    return Sandwich(num, den, lo**d, hi**d)


__all__ = [
    "BMTrace", "bm_trace", "SplitReport", "homogeneous_split_check", "Surrogate", "weierstrass_surrogate",
    "Sandwich", "sandwich_ratio", "FAMILIES",
]
