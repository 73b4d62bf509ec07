"""The circular lift of a weighted interval and the Green approximants on both sides.

A weighted set (E, w) in C^N lifts to a circular set Z in C^(N+1).  Weighted
sup norms on E equal sup norms of homogenized polynomials on Z, so the
weighted Green approximant on E and the homogeneous one on Z differ exactly
by log|t|.  Approximants from finitely many degrees are lower bounds and
converge slowly in the degree.
"""

import math

import numpy as np

from plurikit import (
    Circle,
    Interval,
    build_grid_set,
    green_homogeneous,
    green_unweighted,
    green_weighted,
    homogeneous_split_check,
    lift_circular,
    product_measure,
    robin_estimate,
    uniform_measure,
)
from plurikit.polyalg import Poly, monomials_upto

C = build_grid_set(Circle(), 64)
g = green_unweighted(C, uniform_measure(C), 12)
print(f"unit circle: V(2) ~ {float(g([[2.0]])[0]):.6f}, log 2 = {math.log(2):.6f}")
print(f"unit circle: Robin estimate at 1 = {robin_estimate(g, [[1.0]]).value:.2e} (exact 0)")

I = build_grid_set(Interval(-1, 1), 401)
gi = green_unweighted(I, uniform_measure(I), 24)
print(f"[-1, 1]: V(2) >= {float(gi([[2.0]])[0]):.6f}, log(2 + sqrt 3) = {math.log(2 + math.sqrt(3)):.6f}")

E = build_grid_set(Interval(-1, 1), 81, lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2))
mu = uniform_measure(E)
gw = green_weighted(E, mu, 10)
Z = lift_circular(E, 21)
H = green_homogeneous(Z, base=gw)
rng = np.random.default_rng(1)
t = rng.standard_normal(5) + 1j * rng.standard_normal(5)
z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
print("\nH_Z(t, z) - V_E(z/t) - log|t| at five random points:")
print(H(np.column_stack([t, z])) - gw((z / t)[:, None]) - np.log(np.abs(t)))

p = Poly(2, {b: complex(*rng.standard_normal(2)) for b in monomials_upto(2, 10)})
rep = homogeneous_split_check(Z, product_measure(E, mu, 21), p)
print(f"\nPythagoras across homogeneous parts of a degree-10 p: residual {rep.pythagoras_residual:.1e}")
