"""Weighted orthonormal polynomials and their leading coefficients.

The weighted Vandermonde matrix ``V[i, beta] = sqrt(m_i) w_i**d phi_beta(x_i)``
has Gram matrix equal to the ``L2(w**2d mu)`` Gram matrix of the basis, so a
Householder QR of V is Gram-Schmidt in disguise: ``V R^{-1}`` has orthonormal
columns and the diagonal of R holds the minimal L2 norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConditioningError, InputError, RankDeficiencyError
from .geometry import DiscreteMeasure, WeightedSampleSet, check_same_support
from .polyalg import (
    PLAIN,
    Basis,
    MultiIndex,
    Poly,
    candidate_bases,
    equilibrated_condition,
    monomial_table,
    monomials_upto,
)
from .tolerances import CONDITIONING_GUARD, SIGNIFICANT_ROW_FLOOR


@dataclass(frozen=True, eq=False)
class WeightedVandermonde:
    matrix: np.ndarray
    columns: list
    basis: Basis
    d: int


def _points_for(E, basis):
    if E.real_only and not np.iscomplexobj(np.asarray(basis.center or 0.0)):
        return E.points.real
    return E.points


def weighted_vandermonde(E: WeightedSampleSet, mu: DiscreteMeasure, d: int, basis: Basis = PLAIN) -> WeightedVandermonde:
    """Rows are samples, columns are all ``|beta| <= d`` in lex order."""
    check_same_support(E, mu)
    if d < 0:
        raise InputError("degree must be nonnegative")
    columns = monomials_upto(E.dim, d)
    if len(E) < len(columns):
        raise RankDeficiencyError(
            f"{len(E)} sample points cannot carry {len(columns)} independent monomials of degree <= {d}; "
            "need at least as many points as columns"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        A = monomial_table(_points_for(E, basis), columns, basis)
        scale = np.sqrt(mu.masses) * E.weights**d
        M = A * scale[:, None]
    if not np.all(np.isfinite(M)):
        raise ConditioningError(f"weighted Vandermonde at degree {d} overflows double precision", np.inf)
    return WeightedVandermonde(M, columns, basis, d)


def _significant_rows(E, mu, d):
    with np.errstate(divide="ignore"):
        s = 0.5 * np.log(mu.masses) + d * np.log(E.weights)
    return s >= s.max() + np.log(SIGNIFICANT_ROW_FLOOR)


def default_basis(E: WeightedSampleSet, mu: DiscreteMeasure, d: int) -> Basis:
    """Best-conditioned candidate basis fitted to the numerically significant rows."""
    keep = _significant_rows(E, mu, d)
    best, best_cond = None, np.inf
    for basis in candidate_bases(E.points[keep], E.real_only):
        cond, _ = equilibrated_condition(weighted_vandermonde(E, mu, d, basis).matrix)
        if best is None or cond < best_cond:
            best, best_cond = basis, cond
    return best


@dataclass(frozen=True, eq=False)
class OrthoResult:
    d: int
    basis_order: list
    basis: Basis
    R: np.ndarray  # upper triangular, positive diagonal
    leading_all: dict  # beta -> a_beta for every |beta| <= d
    condition_estimate: float
    _rows: np.ndarray  # w**d phi_beta(x_i) on E, unscaled by mu

    @property
    def leading(self) -> dict:
        return {b: a for b, a in self.leading_all.items() if b.degree == self.d}

    @property
    def l2_minima(self) -> dict:
        return {b: 1.0 / a for b, a in self.leading.items()}

    def _column(self, alpha):
        k = self.basis_order.index(MultiIndex(alpha))
        e = np.zeros(len(self.basis_order), dtype=self.R.dtype)
        e[k] = 1.0
        return k, scipy.linalg.solve_triangular(self.R, e)

    def orthonormal_poly(self, alpha) -> Poly:
        """``p_alpha`` with positive leading coefficient ``a_alpha``."""
        k, c = self._column(alpha)
        return Poly(len(alpha), dict(zip(self.basis_order[: k + 1], c[: k + 1])), self.basis)

    def monic_minimizer(self, alpha) -> Poly:
        """``q_alpha = p_alpha / a_alpha``, monic in ``x**alpha`` and L2-minimal."""
        alpha = MultiIndex(alpha)
        return self.orthonormal_poly(alpha) * (1.0 / self.leading_all[alpha])

    def weighted_values(self, alpha, monic: bool = False) -> np.ndarray:
        """``w**d p_alpha`` (or ``w**d q_alpha``) on the sample points."""
        alpha = MultiIndex(alpha)
        k, c = self._column(alpha)
        v = self._rows[:, : k + 1] @ c[: k + 1]
        return v / self.leading_all[alpha] if monic else v


def orthonormalize(E: WeightedSampleSet, mu: DiscreteMeasure, d: int, basis: Basis | None = None) -> OrthoResult:
    """QR of the weighted Vandermonde; leading coefficients ``a = 1/||w**d q_alpha||``.

    ``condition_estimate`` is ``max/min`` of the diagonal of the triangular
    factor after scaling every column to unit norm (the sines of the angles
    between each column and the span of its predecessors).  Runs where the
    ratio exceeds ``1/CONDITIONING_GUARD`` abort with ``ConditioningError``.
    """
    if basis is None:
        basis = default_basis(E, mu, d)
    V = weighted_vandermonde(E, mu, d, basis)
    cond, R = equilibrated_condition(V.matrix)
    diag = np.diag(R)
    absdiag = np.abs(diag)
    if not cond * CONDITIONING_GUARD < 1.0:
        raise ConditioningError(
            f"weighted Vandermonde columns are numerically dependent (condition estimate {cond:.3e})", cond
        )
    phase = diag / absdiag
    R = R / phase[:, None]
    leading_all = {b: basis.leading(b) / absdiag[k] for k, b in enumerate(V.columns)}
    rows = monomial_table(_points_for(E, basis), V.columns, basis) * (E.weights**d)[:, None]
    return OrthoResult(d, V.columns, basis, R, leading_all, cond, rows)


def l2_optimal_sup_norm(E: WeightedSampleSet, mu: DiscreteMeasure, d: int, alpha, ortho: OrthoResult | None = None) -> float:
    """``max_E w**d |q_alpha|`` for the L2-minimal monic ``q_alpha``."""
    alpha = MultiIndex(alpha)
    if alpha.degree != d:
        raise InputError("alpha must have degree d")
    if ortho is None:
        ortho = orthonormalize(E, mu, d)
    return float(np.abs(ortho.weighted_values(alpha, monic=True)).max())


__all__ = [
    "WeightedVandermonde", "weighted_vandermonde", "default_basis", "OrthoResult", "orthonormalize",
    "l2_optimal_sup_norm",
]
