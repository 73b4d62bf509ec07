"""Discrete approximants of (weighted) pluricomplex Green functions.

A ``GreenApprox`` is a finite family of polynomials, each paired with its
exact discrete sup norm on the generating set.  Evaluation takes the
maximum of ``(1/d) (log|p(z)| - log ||w^d p||_E)`` over the family, so it is
a lower bound for the Green function it approximates: every member is an
admissible competitor in the sup defining it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import InputError, PreconditionError
from .geometry import (
    CircularSample,
    DiscreteMeasure,
    WeightedSampleSet,
    check_same_support,
    uniform_measure,
)
from .orthopoly import orthonormalize
from .polyalg import Basis, Poly, homogeneous_table, homogenize, monomial_table
from .tolerances import DEFAULT_DMAX, ROBIN_S_LIST


@dataclass(frozen=True, eq=False)
class DegreeBlock:
    """All members of one degree: ``p_j = sum_beta C[beta, j] phi_beta``."""

    d: int
    basis: Basis
    columns: list
    C: np.ndarray
    log_norm: np.ndarray  # log of each member's normalizer


def _log_abs(v):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(v))


@dataclass(frozen=True, eq=False)
class GreenApprox:
    kind: str  # unweighted | weighted | homogeneous
    blocks: list
    source: dict = field(default_factory=dict)

    @property
    def d_max(self) -> int:
        return max(b.d for b in self.blocks)

    @property
    def family(self) -> list:
        """``(polynomial, d, normalizer)`` for every member."""
        out = []
        for b in self.blocks:
            for j in range(len(b.columns)):
                p = Poly(len(b.columns[0]), dict(zip(b.columns, b.C[:, j])), b.basis)
                if self.kind == "homogeneous":
                    p = homogenize(p, b.d)
                out.append((p, b.d, math.exp(b.log_norm[j])))
        return out

    def _table(self, block, pts):
        if self.kind == "homogeneous":
            return homogeneous_table(pts, block.columns, block.basis, block.d)
        return monomial_table(pts, block.columns, block.basis)

    def _member_values(self, x, d_cap=None):
        pts = np.atleast_2d(np.asarray(x, dtype=complex))
        for b in self.blocks:
            if d_cap is not None and b.d > d_cap:
                continue
            vals = self._table(b, pts) @ b.C
            yield b.d, (_log_abs(vals) - b.log_norm[None, :]) / b.d

    def evaluate(self, x, d_cap: int | None = None) -> np.ndarray:
        """Approximant at the rows of ``x`` (points of C^N, or (t, z) for the homogeneous kind)."""
        best = None
        for _, v in self._member_values(x, d_cap):
            m = v.max(axis=1)
            best = m if best is None else np.maximum(best, m)
        return best

    __call__ = evaluate

    def argmax_degree(self, x) -> np.ndarray:
        """Degree of the member attaining the max at each row."""
        best, arg = None, None
        for d, v in self._member_values(x):
            m = v.max(axis=1)
            if best is None:
                best, arg = m, np.full(m.shape, d)
            else:
                upd = m > best
                best = np.where(upd, m, best)
                arg = np.where(upd, d, arg)
        return arg

    def convergence_gap(self, x) -> np.ndarray:
        """``V(x) - V_{d_max // 2}(x)``, a cheap convergence indicator (always >= 0)."""
        return self.evaluate(x) - self.evaluate(x, d_cap=max(1, self.d_max // 2))

    def extended(self, x) -> np.ndarray:
        """``max(0, H_Z)`` for the homogeneous kind; the plain approximant otherwise."""
        v = self.evaluate(x)
        return np.maximum(v, 0.0) if self.kind == "homogeneous" else v


def _orthonormal_blocks(E, mu, d_max):
    check_same_support(E, mu)
    if d_max < 1:
        raise InputError("d_max must be >= 1")
    act = E.active
    out = []
    for d in range(1, d_max + 1):
        o = orthonormalize(E, mu, d)
        M = len(o.basis_order)
        C = scipy.linalg.solve_triangular(o.R, np.eye(M, dtype=o.R.dtype))
        pts = E.points[act].real if E.real_only else E.points[act]
        vals = monomial_table(pts, o.basis_order, o.basis) @ C
        wd = E.weights[act] ** d
        norms = (wd[:, None] * np.abs(vals)).max(axis=0)
        out.append(DegreeBlock(d, o.basis, o.basis_order, C, np.log(norms)))
    return out


def green_weighted(E: WeightedSampleSet, mu: DiscreteMeasure, d_max: int = DEFAULT_DMAX) -> GreenApprox:
    """Lower approximant of ``V_{E,Q}`` from the weighted orthonormal families, d <= d_max."""
    blocks = _orthonormal_blocks(E, mu, d_max)
    return GreenApprox("weighted", blocks, {"points": len(E), "d_max": d_max, "dim": E.dim})


def green_unweighted(E: WeightedSampleSet, mu: DiscreteMeasure, d_max: int = DEFAULT_DMAX) -> GreenApprox:
    """Lower approximant of ``V_E`` (the weight is replaced by 1)."""
    E1 = E.with_weights(np.ones(len(E)))
    blocks = _orthonormal_blocks(E1, mu, d_max)
    return GreenApprox("unweighted", blocks, {"points": len(E), "d_max": d_max, "dim": E.dim})


def green_homogeneous(Z: CircularSample, d_max: int = DEFAULT_DMAX, mu: DiscreteMeasure | None = None,
                      base: GreenApprox | None = None) -> GreenApprox:
    """Approximant of ``H_Z`` from the homogenized weighted family.

    Every member ``P_d = t**d p(z/t)`` is normalized by its max over the
    samples of Z.  ``base`` reuses an existing weighted family.
    """
    if len(Z) == 0:
        raise InputError("the circular sample is empty")
    if base is None:
        E = Z.base
        base = green_weighted(E, mu if mu is not None else uniform_measure(E), d_max)
    elif base.kind != "weighted":
        raise InputError("base family must be of the weighted kind")
    blocks = []
    probe = GreenApprox("homogeneous", [], {})
    for b in base.blocks:
        vals = probe._table(b, Z.samples) @ b.C
        norms = np.abs(vals).max(axis=0)
        blocks.append(DegreeBlock(b.d, b.basis, b.columns, b.C, np.log(norms)))
    return GreenApprox("homogeneous", blocks, {"samples": len(Z), "circle_points": Z.circle_points, "d_max": base.d_max})


@dataclass
class RobinEstimate:
    value: float
    s_list: tuple
    trace: np.ndarray


def robin_estimate(g, z, s_list: Sequence[float] = ROBIN_S_LIST) -> RobinEstimate:
    """``g(s z) - log s`` for growing s; the last entry estimates the Robin function.

    ``g`` is a ``GreenApprox`` (the homogeneous kind uses ``max(0, H_Z)``) or any
    callable on rows of points.
    """
    s_list = tuple(float(s) for s in s_list)
    if any(b <= a for a, b in zip(s_list, s_list[1:])) or s_list[0] <= 0:
        raise InputError("s_list must be ascending and positive")
    if s_list[-1] < 1e3:
        raise InputError("largest s must be at least 1e3")
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if isinstance(g, GreenApprox):
        f: Callable = g.extended
    else:
        f = g
    trace = np.array([np.asarray(f(s * z), dtype=float).reshape(-1) - math.log(s) for s in s_list])
    return RobinEstimate(trace[-1].copy() if trace.shape[1] > 1 else float(trace[-1, 0]), s_list, trace)


@dataclass
class MonotonicityReport:
    probe_points: np.ndarray
    v_hi: np.ndarray  # approximant under the larger weight
    v_lo: np.ndarray
    max_violation: float  # max(v_hi - v_lo, 0); zero when the check passes

    @property
    def ok(self) -> bool:
        return self.max_violation == 0.0


def _as_weights(E, w):
    if isinstance(w, WeightedSampleSet):
        if not np.array_equal(w.points, E.points):
            raise InputError("weight sets must share the points of E")
        return np.asarray(w.weights)
    if callable(w):
        return np.asarray(w(E.points), dtype=float).reshape(-1)
    return np.broadcast_to(np.asarray(w, dtype=float), (len(E),)).copy()


def renormalized(g: GreenApprox, E: WeightedSampleSet) -> GreenApprox:
    """Same polynomials, normalizers recomputed under the weights of E."""
    act = E.active
    pts = E.points[act].real if E.real_only else E.points[act]
    blocks = []
    for b in g.blocks:
        vals = monomial_table(pts, b.columns, b.basis) @ b.C
        wd = E.weights[act] ** b.d
        with np.errstate(divide="ignore"):
            blocks.append(DegreeBlock(b.d, b.basis, b.columns, b.C, np.log((wd[:, None] * np.abs(vals)).max(axis=0))))
    return GreenApprox("weighted", blocks, dict(g.source, renormalized=True))


def weight_monotonicity_check(E: WeightedSampleSet, mu: DiscreteMeasure, w_hi, w_lo, d_max: int, probe_points) -> MonotonicityReport:
    """Compare approximants for ``w_hi >= w_lo`` built from one shared family.

    The family is the orthonormal family of the ``w_lo`` problem; only the
    normalizers change, so ``V_hi <= V_lo`` holds member by member.
    """
    hi = _as_weights(E, w_hi)
    lo = _as_weights(E, w_lo)
    if np.any(hi < lo):
        raise PreconditionError("w_hi must be >= w_lo at every sample point")
    E_lo = E.with_weights(lo)
    E_hi = E.with_weights(hi)
    g_lo = green_weighted(E_lo, mu, d_max)
    g_hi = renormalized(g_lo, E_hi)
    g_lo = renormalized(g_lo, E_lo)
    probes = np.atleast_2d(np.asarray(probe_points, dtype=complex))
    v_hi, v_lo = g_hi(probes), g_lo(probes)
    viol = float(np.max(np.maximum(v_hi - v_lo, 0.0)))
    return MonotonicityReport(probes, v_hi, v_lo, viol)


__all__ = [
    "DegreeBlock", "GreenApprox", "green_weighted", "green_unweighted", "green_homogeneous",
    "RobinEstimate", "robin_estimate", "MonotonicityReport", "weight_monotonicity_check", "renormalized",
]
