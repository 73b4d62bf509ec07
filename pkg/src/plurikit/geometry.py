"""Discretized compact sets, weights, measures and the circular lift.

A compact set E is a finite point cloud; sup norms over E are maxima over
the samples.  ``lift_circular`` places the circle ``|t| = w(lambda)`` of the
line ``z = lambda t`` over every sample, ``extract_weight`` goes back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AdmissibilityError, EmptyResultError, InputError
from .tolerances import GROUPING_RTOL


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


def _as_point_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise InputError("points must be an (n, N) array with N >= 1")
    return pts


def _check_distinct(pts: np.ndarray):
    flat = np.concatenate([pts.real, pts.imag], axis=1)
    if np.unique(flat, axis=0).shape[0] != flat.shape[0]:
        raise InputError("sample points must be pairwise distinct")


@dataclass(frozen=True, eq=False)
class WeightedSampleSet:
    """Points of E with weight values; ``Q = -log w`` is derived on demand."""

    points: np.ndarray
    weights: np.ndarray
    real_only: bool | None = None

    def __post_init__(self):
        pts = _as_point_array(self.points)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise InputError("weights and points differ in length")
        if not np.all(np.isfinite(w)):
            raise InputError("weights must be finite")
        if np.any(w < 0):
            raise InputError("weights must be nonnegative")
        if not np.any(w > 0):
            raise AdmissibilityError("all weights are zero; the weight is not admissible")
        _check_distinct(pts)
        is_real = bool(np.all(pts.imag == 0))
        if self.real_only and not is_real:
            raise InputError("real_only set has points with nonzero imaginary part")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "real_only", is_real if self.real_only is None else bool(self.real_only))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    @property
    def Q(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return -np.log(self.weights)

    @property
    def active(self) -> np.ndarray:
        return self.weights > 0

    def with_weights(self, weights) -> "WeightedSampleSet":
        return WeightedSampleSet(self.points, weights, self.real_only)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = _as_point_array(self.points)
        m = np.asarray(self.masses, dtype=float).reshape(-1)
        if m.shape[0] != pts.shape[0]:
            raise InputError("masses and points differ in length")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise InputError("masses must be positive and finite")
        _check_distinct(pts)
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "masses", _frozen(m))

    @property
    def total(self) -> float:
        return float(np.sum(self.masses))

    def __len__(self):
        return self.points.shape[0]


def uniform_measure(E: WeightedSampleSet, total: float = 1.0) -> DiscreteMeasure:
    n = len(E)
    return DiscreteMeasure(E.points, np.full(n, total / n))


def check_same_support(E: WeightedSampleSet, mu: DiscreteMeasure):
    if mu.points.shape != E.points.shape or not np.array_equal(mu.points, E.points):
        raise InputError("measure points do not coincide with the sample set points")


# --------------------------------------------------------------------------
# domains and grids


@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple

    @property
    def dim(self):
        return len(self.lower)


@dataclass(frozen=True)
class Ball:
    """Real ball of radius R in R^dim, sampled by a tensor grid clipped to |x| <= R."""

    radius: float
    dim: int = 1


@dataclass(frozen=True)
class Torus:
    """Product of circles ``|z_k - c_k| = r_k`` in C^dim (dim = 1 is a circle)."""

    radii: tuple = (1.0,)
    center: tuple | None = None

    @property
    def dim(self):
        return len(self.radii)


def Interval(a: float, b: float) -> Box:
    return Box((float(a),), (float(b),))


def Circle(radius: float = 1.0, center: complex = 0.0) -> Torus:
    return Torus((float(radius),), (complex(center),))


def roots_of_unity(m: int) -> np.ndarray:
    """``exp(2 pi i k / m)``, exact at multiples of a quarter turn."""
    k = np.arange(m)
    out = np.exp(2j * np.pi * k / m)
    for kk in range(m):
        if (4 * kk) % m == 0:
            out[kk] = (1, 1j, -1, -1j)[(4 * kk) // m]
    return out


def _per_axis(resolution, dim):
    res = np.broadcast_to(np.atleast_1d(resolution), (dim,)).astype(int)
    return [int(r) for r in res]


def grid_points(domain, resolution) -> tuple[np.ndarray, bool]:
    if isinstance(domain, Box):
        res = _per_axis(resolution, domain.dim)
        if min(res) < 2:
            raise InputError("resolution must be >= 2 per axis")
        axes = [np.linspace(lo, hi, r) for lo, hi, r in zip(domain.lower, domain.upper, res)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1).astype(complex), True
    if isinstance(domain, Ball):
        res = _per_axis(resolution, domain.dim)
        if min(res) < 2:
            raise InputError("resolution must be >= 2 per axis")
        R = float(domain.radius)
        axes = [np.linspace(-R, R, r) for r in res]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        keep = np.sqrt(np.sum(pts**2, axis=1)) <= R * (1 + 1e-12)
        return pts[keep].astype(complex), True
    if isinstance(domain, Torus):
        res = _per_axis(resolution, domain.dim)
        if min(res) < 2:
            raise InputError("resolution must be >= 2 per axis")
        center = domain.center or (0.0,) * domain.dim
        axes = [c + r * roots_of_unity(n) for c, r, n in zip(center, domain.radii, res)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1), False
    raise InputError(f"unsupported domain {domain!r}")


def _eval_weight(weight_fn, pts):
    if weight_fn is None:
        return np.ones(pts.shape[0])
    if np.isscalar(weight_fn):
        return np.full(pts.shape[0], float(weight_fn))
    w = np.asarray(weight_fn(pts), dtype=float).reshape(-1)
    if w.shape[0] != pts.shape[0]:
        raise InputError("weight function returned the wrong number of values")
    return w


def build_grid_set(domain, resolution, weight_fn: Callable | float | None = None) -> WeightedSampleSet:
    """Tensor grid over ``domain`` with ``weight_fn`` evaluated pointwise.

    ``weight_fn`` receives the (n, N) complex point array and returns n values.
    """
    pts, real = grid_points(domain, resolution)
    w = _eval_weight(weight_fn, pts)
    if not np.all(np.isfinite(w)):
        raise InputError("weight function returned a non-finite value")
    return WeightedSampleSet(pts, w, real_only=real)


def gauss_legendre_grid(lower, upper, nodes, weight_fn=None, density=None):
    """Tensor Gauss-Legendre nodes on a box.

    Returns ``(E, mu)``: the nodes carrying ``weight_fn`` and the quadrature
    measure with ``density`` (if any) folded into the masses.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    dim = lower.shape[0]
    res = _per_axis(nodes, dim)
    xs, ws = [], []
    for lo, hi, n in zip(lower, upper, res):
        x, w = np.polynomial.legendre.leggauss(n)
        xs.append(lo + (hi - lo) * (x + 1) / 2)
        ws.append(w * (hi - lo) / 2)
    mesh = np.meshgrid(*xs, indexing="ij")
    wmesh = np.meshgrid(*ws, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1).astype(complex)
    masses = np.prod(np.stack([m.ravel() for m in wmesh], axis=1), axis=1)
    if density is not None:
        masses = masses * np.asarray(density(pts), dtype=float).reshape(-1)
    E = WeightedSampleSet(pts, _eval_weight(weight_fn, pts), real_only=True)
    return E, DiscreteMeasure(pts, masses)


# --------------------------------------------------------------------------
# circular lift


@dataclass(frozen=True, eq=False)
class CircularSample:
    base: WeightedSampleSet
    circle_points: int
    samples: np.ndarray
    base_index: np.ndarray
    circle_index: np.ndarray

    @property
    def dim(self):
        return self.base.dim + 1

    def __len__(self):
        return self.samples.shape[0]


def lift_circular(E: WeightedSampleSet, m: int) -> CircularSample:
    """Sample ``Z(E, w)``: m points ``(t, lambda t)`` with ``|t| = w(lambda)`` per base point."""
    if int(m) != m or m < 1:
        raise InputError("circle sample count m must be a positive integer")
    m = int(m)
    roots = roots_of_unity(m)
    idx = np.flatnonzero(E.weights > 0)
    t = (E.weights[idx][:, None] * roots[None, :]).reshape(-1)
    base_index = np.repeat(idx, m)
    circle_index = np.tile(np.arange(m), idx.shape[0])
    lam = E.points[base_index]
    samples = np.empty((t.shape[0], E.dim + 1), dtype=complex)
    samples[:, 0] = t
    samples[:, 1:] = lam * t[:, None]
    return CircularSample(E, m, _frozen(samples), _frozen(base_index), _frozen(circle_index))


def product_measure(E: WeightedSampleSet, mu: DiscreteMeasure, m: int) -> DiscreteMeasure:
    """``nu = dm_lambda (x) mu`` on the lift; each circle carries mass 1 before weighting by mu."""
    check_same_support(E, mu)
    Z = lift_circular(E, m)
    masses = mu.masses[Z.base_index] / Z.circle_points
    return DiscreteMeasure(Z.samples, masses)


def _samples_array(Z) -> np.ndarray:
    if isinstance(Z, CircularSample):
        return Z.samples
    arr = np.asarray(Z, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise InputError("circular samples must be an (M, N+1) array")
    return arr


def extract_weight(Z, rtol: float = GROUPING_RTOL) -> WeightedSampleSet:
    """``w(lambda) = max |t|`` over the samples on each line ``C_lambda``.

    Samples with ``t = 0`` are skipped.  Lines are identified by
    ``lambda = z / t`` within relative tolerance ``rtol``.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components
    from scipy.spatial import cKDTree

    S = _samples_array(Z)
    keep = S[:, 0] != 0
    if not np.any(keep):
        raise EmptyResultError("every sample has t = 0; no line C_lambda is determined")
    S = S[keep]
    t = S[:, 0]
    lam = S[:, 1:] / t[:, None]
    emb = np.concatenate([lam.real, lam.imag], axis=1)
    radius = rtol * max(1.0, float(np.abs(lam).max()))
    pairs = cKDTree(emb).query_pairs(radius, output_type="ndarray")
    n = S.shape[0]
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)) if len(pairs) else coo_matrix((n, n))
    _, labels = connected_components(graph, directed=False)
    # order groups by first appearance
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    points, weights = [], []
    modulus = np.abs(t)
    for g in np.unique(labels)[order]:
        members = np.flatnonzero(labels == g)
        best = members[np.argmax(modulus[members])]
        points.append(lam[best])
        weights.append(modulus[best])
    return WeightedSampleSet(np.array(points), np.array(weights))


__all__ = [
    "WeightedSampleSet", "DiscreteMeasure", "CircularSample", "Box", "Ball", "Torus", "Interval",
    "Circle", "roots_of_unity", "build_grid_set", "gauss_legendre_grid", "uniform_measure",
    "lift_circular", "product_measure", "extract_weight", "check_same_support", "grid_points",
]
