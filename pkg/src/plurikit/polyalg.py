"""Multi-indices, lexicographic order, polynomials and the H-principle.

Polynomials are sparse maps ``MultiIndex -> complex``.  Each coefficient
multiplies a tensor-product basis function ``phi_beta(x) = prod_k
phi_{beta_k}((x_k - c_k) / h_k)`` where ``phi_j`` is either the power
``u**j`` or the Chebyshev polynomial ``T_j(u)``.  The default basis
(monomials, ``c = 0``, ``h = 1``) gives the plain ``sum c_beta z**beta``.

Any such ``phi_beta`` equals a positive multiple of ``x**beta`` plus terms
``x**gamma`` with ``gamma <= beta`` componentwise, so every set of
multi-indices that is closed under componentwise decrease spans the same
space in every basis.  Lex-prefixes of ``{|beta| <= d}`` have that property,
which is what lets the solvers switch bases for conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError
from .tolerances import DIRECTION_ATOL


class MultiIndex(tuple):
    """Exponent vector in N^N.  Tuple comparison is already lexicographic."""

    def __new__(cls, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise InputError(f"negative exponent in {exps}")
        return super().__new__(cls, exps)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def dim(self) -> int:
        return len(self)

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"


def lex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1; the first differing coordinate decides."""
    if len(a) != len(b):
        raise InputError(f"dimension mismatch: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def monomials_upto(dim: int, d: int) -> list[MultiIndex]:
    """All multi-indices with ``|beta| <= d`` in ascending lex order."""

    def rec(n, budget):
        if n == 0:
            yield ()
            return
        for first in range(budget + 1):
            for rest in rec(n - 1, budget - first):
                yield (first,) + rest

    return [MultiIndex(b) for b in rec(dim, d)]


def lower_order_basis(alpha: Sequence[int]) -> list[MultiIndex]:
    """``beta <_lex alpha`` with the total-degree cap ``|beta| <= |alpha|``."""
    alpha = MultiIndex(alpha)
    return [b for b in monomials_upto(alpha.dim, alpha.degree) if b < alpha]


# --------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class Basis:
    kind: str = "monomial"
    center: tuple | None = None
    scale: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("monomial", "chebyshev"):
            raise InputError(f"unknown basis kind {self.kind!r}")
        if self.scale is not None and any(not (s > 0) for s in self.scale):
            raise InputError("basis scales must be positive")

    @property
    def is_plain(self) -> bool:
        return (
            self.kind == "monomial"
            and (self.center is None or all(c == 0 for c in self.center))
            and (self.scale is None or all(s == 1 for s in self.scale))
        )

    def _cs(self, k):
        c = 0.0 if self.center is None else self.center[k]
        h = 1.0 if self.scale is None else self.scale[k]
        return c, h

    def table(self, x: np.ndarray, k: int, jmax: int) -> np.ndarray:
        """Columns ``phi_j((x - c_k) / h_k)`` for ``j = 0..jmax``."""
        c, h = self._cs(k)
        u = x if (c == 0 and h == 1) else (x - c) / h
        out = np.empty(u.shape + (jmax + 1,), dtype=np.result_type(u, float))
        out[..., 0] = 1.0
        if jmax >= 1:
            out[..., 1] = u
        for j in range(2, jmax + 1):
            if self.kind == "monomial":
                out[..., j] = out[..., j - 1] * u
            else:
                out[..., j] = 2.0 * u * out[..., j - 1] - out[..., j - 2]
        return out

    def homogeneous_table(self, t: np.ndarray, z: np.ndarray, k: int, jmax: int):
        """Homogeneous analogue ``t**j phi_j((z/t - c)/h)`` as a polynomial in (t, z)."""
        c, h = self._cs(k)
        v = z if (c == 0 and h == 1) else (z - c * t) / h
        out = np.empty(v.shape + (jmax + 1,), dtype=np.result_type(v, t, float))
        out[..., 0] = 1.0
        if jmax >= 1:
            out[..., 1] = v
        t2 = t * t
        for j in range(2, jmax + 1):
            if self.kind == "monomial":
                out[..., j] = out[..., j - 1] * v
            else:
                out[..., j] = 2.0 * v * out[..., j - 1] - t2 * out[..., j - 2]
        return out

    def leading(self, beta: Sequence[int]) -> float:
        """Coefficient of ``x**beta`` in ``phi_beta``."""
        lead = 1.0
        for k, j in enumerate(beta):
            _, h = self._cs(k)
            lead /= abs(h) ** j
            if self.kind == "chebyshev" and j >= 1:
                lead *= 2.0 ** (j - 1)
        return lead

    def to_power_series(self, k: int, j: int) -> np.ndarray:
        """Coefficients (ascending powers of x_k) of ``phi_j((x_k - c)/h)``."""
        from numpy.polynomial import Polynomial
        from numpy.polynomial import chebyshev as C

        c, h = self._cs(k)
        u = Polynomial([-c / h, 1.0 / h])
        if self.kind == "monomial":
            in_u = np.zeros(j + 1)
            in_u[j] = 1.0
        else:
            e = np.zeros(j + 1)
            e[j] = 1.0
            in_u = C.cheb2poly(e)
        out = np.zeros(j + 1, dtype=complex)
        power = Polynomial([1.0])
        for i, a in enumerate(in_u):
            if a != 0:
                coef = power.coef
                out[: len(coef)] += a * coef
            power = power * u
        return out

    def to_json(self):
        if self.is_plain:
            return None
        return {
            "kind": self.kind,
            "center": None if self.center is None else [[complex(c).real, complex(c).imag] for c in self.center],
            "scale": None if self.scale is None else list(map(float, self.scale)),
        }

    @classmethod
    def from_json(cls, obj):
        if obj is None:
            return PLAIN
        center = obj.get("center")
        if center is not None:
            center = tuple(complex(r, i) if i else float(r) for r, i in center)
        scale = obj.get("scale")
        return cls(obj["kind"], center, None if scale is None else tuple(scale))


PLAIN = Basis()


def fitted_basis(points: np.ndarray, kind: str) -> Basis:
    """Affine per-coordinate map onto [-1, 1] (real) or the unit polydisc."""
    pts = np.asarray(points)
    if kind == "chebyshev":
        re = pts.real
        lo, hi = re.min(axis=0), re.max(axis=0)
        center = (lo + hi) / 2
        scale = np.where(hi > lo, (hi - lo) / 2, 1.0)
        center = np.where(np.abs(center) <= 1e-12 * scale, 0.0, center)
        return Basis("chebyshev", tuple(map(float, center)), tuple(map(float, scale)))
    if np.all(pts.imag == 0):
        re = pts.real
        center = (re.min(axis=0) + re.max(axis=0)) / 2
        scale = np.abs(re - center).max(axis=0)
        center = tuple(map(float, center))
    else:
        c = pts.mean(axis=0)
        center = tuple(complex(v) for v in c)
        scale = np.abs(pts - c).max(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    # symmetric sets should get an exactly centered basis
    center = tuple(0.0 if abs(c) <= 1e-12 * s else c for c, s in zip(center, scale))
    return Basis("monomial", center, tuple(map(float, scale)))


def candidate_bases(points: np.ndarray, real: bool) -> list[Basis]:
    """Bases worth trying for a problem living on ``points``.

    Real sets: Chebyshev on the bounding box, then centered and scaled
    powers.  Complex sets: centered and scaled powers only.
    """
    if real:
        return [fitted_basis(points, "chebyshev"), fitted_basis(points, "monomial")]
    return [fitted_basis(points, "monomial")]


def equilibrated_condition(M: np.ndarray) -> tuple[float, np.ndarray]:
    """``(max/min of |R_kk| / ||M_k||, R)`` for the QR factor R of M.

    Column scaling does not change the estimate: it measures how far each
    column sits from the span of the earlier ones.
    """
    norms = np.linalg.norm(M, axis=0)
    R = np.linalg.qr(M, mode="r")
    if M.shape[1] == 0:
        return 1.0, R
    if np.any(norms == 0):
        return np.inf, R
    sines = np.abs(np.diag(R)) / norms
    return (float(sines.max() / sines.min()) if sines.min() > 0 else np.inf), R


# --------------------------------------------------------------------------
# polynomials


def _as_points(z, dim):
    arr = np.asarray(z)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.shape[-1] != dim:
        raise InputError(f"dimension mismatch: points have {arr.shape[-1]} coords, expected {dim}")
    return arr, single


def _clean_terms(terms: Mapping) -> dict:
    out = {}
    for beta, c in terms.items():
        c = complex(c)
        if c != 0:
            out[MultiIndex(beta)] = c
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class Poly:
    dim: int
    terms: dict = field(default_factory=dict)
    basis: Basis = PLAIN

    def __post_init__(self):
        terms = _clean_terms(self.terms)
        for beta in terms:
            if len(beta) != self.dim:
                raise InputError(f"term {tuple(beta)} has wrong dimension for dim={self.dim}")
        object.__setattr__(self, "terms", terms)

    @property
    def degree(self) -> int:
        return max((b.degree for b in self.terms), default=0)

    def __call__(self, z):
        return eval_poly(self, z)

    def coefficient(self, beta) -> complex:
        return self.terms.get(MultiIndex(beta), 0j)

    def to_monomial(self) -> "Poly":
        if self.basis.is_plain:
            return self
        deg = self.degree
        shape = (deg + 1,) * self.dim
        dense = np.zeros(shape, dtype=complex)
        cache = {}
        for beta, c in self.terms.items():
            factors = []
            for k, j in enumerate(beta):
                if (k, j) not in cache:
                    cache[k, j] = self.basis.to_power_series(k, j)
                factors.append(cache[k, j])
            block = factors[0]
            for f in factors[1:]:
                block = np.multiply.outer(block, f)
            idx = tuple(slice(0, j + 1) for j in beta)
            dense[idx] += c * block
        terms = {}
        for idx in zip(*np.nonzero(dense)):
            terms[idx] = dense[idx]
        return Poly(self.dim, terms)

    # small amount of arithmetic, for monomial-kind bases only
    def _check_compatible(self, other):
        if self.dim != other.dim or self.basis != other.basis:
            raise InputError("polynomials live in different spaces or bases")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly(self.dim, {(0,) * self.dim: other}, self.basis)
        self._check_compatible(other)
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, 0) + c
        return Poly(self.dim, terms, self.basis)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {b: -c for b, c in self.terms.items()}, self.basis)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.dim, {b: c * other for b, c in self.terms.items()}, self.basis)
        self._check_compatible(other)
        if self.basis.kind != "monomial":
            raise InputError("products are only supported in a monomial basis")
        terms = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                b = tuple(i + j for i, j in zip(b1, b2))
                terms[b] = terms.get(b, 0) + c1 * c2
        return Poly(self.dim, terms, self.basis)

    __rmul__ = __mul__


def eval_poly(p: Poly, z):
    """Evaluate at one point (vector) or many (rows); terms summed in lex order."""
    pts, single = _as_points(z, p.dim)
    n = pts.shape[0]
    acc = np.zeros(n, dtype=complex)
    if p.terms:
        jmax = [max(b[k] for b in p.terms) for k in range(p.dim)]
        tabs = [p.basis.table(pts[:, k], k, jmax[k]) for k in range(p.dim)]
        for beta, c in p.terms.items():
            term = np.full(n, c, dtype=complex)
            for k, j in enumerate(beta):
                if j:
                    term = term * tabs[k][:, j]
            acc += term
    return acc[0] if single else acc


@dataclass(frozen=True)
class HomogeneousPoly:
    """Homogeneous polynomial in (t, z_1..z_N); multi-indices are (e_t, beta)."""

    dim: int
    degree: int
    terms: dict = field(default_factory=dict)
    basis: Basis = PLAIN

    def __post_init__(self):
        terms = _clean_terms(self.terms)
        for idx in terms:
            if len(idx) != self.dim:
                raise InputError("term has wrong dimension")
            if idx.degree != self.degree:
                raise InputError(f"term {tuple(idx)} is not of degree {self.degree}")
        object.__setattr__(self, "terms", terms)

    def __call__(self, x):
        return eval_homogeneous(self, x)


def eval_homogeneous(P: HomogeneousPoly, x):
    pts, single = _as_points(x, P.dim)
    n = pts.shape[0]
    acc = np.zeros(n, dtype=complex)
    if P.terms:
        t = pts[:, 0]
        N = P.dim - 1
        jmax = [max(idx[k + 1] for idx in P.terms) for k in range(N)]
        tabs = [P.basis.homogeneous_table(t, pts[:, k + 1], k, jmax[k]) for k in range(N)]
        emax = max(idx[0] for idx in P.terms)
        tpow = np.empty((n, emax + 1), dtype=complex)
        tpow[:, 0] = 1.0
        for e in range(1, emax + 1):
            tpow[:, e] = tpow[:, e - 1] * t
        for idx, c in P.terms.items():
            term = np.full(n, c, dtype=complex)
            if idx[0]:
                term = term * tpow[:, idx[0]]
            for k in range(N):
                if idx[k + 1]:
                    term = term * tabs[k][:, idx[k + 1]]
            acc += term
    return acc[0] if single else acc


def homogenize(G: Poly, d: int) -> HomogeneousPoly:
    """``P_d(t, z) = t**d G(z/t)``: pad every term with ``t**(d - |beta|)``."""
    if G.degree > d:
        raise InputError(f"cannot homogenize degree {G.degree} polynomial to degree {d}")
    terms = {(d - b.degree,) + tuple(b): c for b, c in G.terms.items()}
    return HomogeneousPoly(G.dim + 1, d, terms, G.basis)


def dehomogenize(P: HomogeneousPoly) -> Poly:
    """Substitute ``t = 1``."""
    terms = {}
    for idx, c in P.terms.items():
        beta = MultiIndex(idx[1:])
        terms[beta] = terms.get(beta, 0) + c
    return Poly(P.dim - 1, terms, P.basis)


def homogeneous_parts(p: Poly) -> dict[int, HomogeneousPoly]:
    """Split a polynomial in (t, z) (plain basis) by total degree."""
    if not p.basis.is_plain:
        raise InputError("homogeneous splitting needs the plain monomial basis")
    parts: dict[int, dict] = {}
    for b, c in p.terms.items():
        parts.setdefault(b.degree, {})[b] = c
    return {i: HomogeneousPoly(p.dim, i, terms) for i, terms in sorted(parts.items())}


# --------------------------------------------------------------------------
# directions


@dataclass(frozen=True)
class Direction:
    theta: tuple

    def __post_init__(self):
        theta = tuple(float(x) for x in np.atleast_1d(self.theta))
        if any(not (x > 0) for x in theta):
            raise InputError("direction entries must be strictly positive")
        if abs(math.fsum(theta) - 1.0) > DIRECTION_ATOL:
            raise InputError(f"direction must sum to 1, got {math.fsum(theta)!r}")
        object.__setattr__(self, "theta", theta)

    @property
    def dim(self):
        return len(self.theta)


def direction_sequence(theta: Direction, j: int) -> MultiIndex:
    """Multi-index of degree j pointing along theta (floor, remainder last)."""
    if j < 1:
        raise InputError("j must be >= 1")
    if not isinstance(theta, Direction):
        theta = Direction(theta)
    head = [int(math.floor(j * t + 1e-9)) for t in theta.theta[:-1]]
    used = sum(head)
    if used > j:
        head[-1] -= used - j
        used = j
    return MultiIndex(head + [j - used])


def monomial_table(points: np.ndarray, columns: Sequence[MultiIndex], basis: Basis = PLAIN) -> np.ndarray:
    """Matrix of ``phi_beta(x_i)``; rows are points, columns follow ``columns``."""
    pts = np.asarray(points)
    dim = pts.shape[1]
    jmax = [max((b[k] for b in columns), default=0) for k in range(dim)]
    tabs = [basis.table(pts[:, k], k, jmax[k]) for k in range(dim)]
    out = np.ones((pts.shape[0], len(columns)), dtype=tabs[0].dtype if tabs else float)
    for col, beta in enumerate(columns):
        for k, j in enumerate(beta):
            if j:
                out[:, col] *= tabs[k][:, j]
    return out


def homogeneous_table(points: np.ndarray, columns: Sequence[MultiIndex], basis: Basis, d: int) -> np.ndarray:
    """Matrix of ``t**(d - |beta|) * t**|beta| phi_beta(z/t)`` at rows ``(t, z_1..z_N)``.

    Column ``beta`` evaluates the homogenization to degree d of ``phi_beta``;
    no division by t takes place, so ``t = 0`` is allowed.
    """
    pts = np.asarray(points, dtype=complex)
    t = pts[:, 0]
    dim = pts.shape[1] - 1
    jmax = [max((b[k] for b in columns), default=0) for k in range(dim)]
    tabs = [basis.homogeneous_table(t, pts[:, k + 1], k, jmax[k]) for k in range(dim)]
    tpow = np.ones((pts.shape[0], d + 1), dtype=complex)
    for e in range(1, d + 1):
        tpow[:, e] = tpow[:, e - 1] * t
    out = np.empty((pts.shape[0], len(columns)), dtype=complex)
    for col, beta in enumerate(columns):
        v = tpow[:, d - sum(beta)].copy()
        for k, j in enumerate(beta):
            if j:
                v *= tabs[k][:, j]
        out[:, col] = v
    return out


def binomial_count(dim: int, d: int) -> int:
    return math.comb(d + dim, dim)


__all__ = [
    "MultiIndex", "lex_compare", "monomials_upto", "lower_order_basis", "Basis", "PLAIN",
    "fitted_basis", "candidate_bases", "equilibrated_condition", "Poly", "eval_poly", "HomogeneousPoly", "eval_homogeneous",
    "homogenize", "dehomogenize", "homogeneous_parts", "Direction", "direction_sequence",
    "monomial_table", "homogeneous_table", "binomial_count",
]
