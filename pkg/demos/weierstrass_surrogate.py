"""Replacing a continuous weight by a polynomial surrogate.

log w is fitted by a polynomial g, then exp(g) is truncated to a polynomial
H with w/H in [1 - 2 eps, 1 + 2 eps] on the samples.  Weighted sup norms of
degree-d polynomials then change by at most the band raised to the d-th power.
"""

import numpy as np

from plurikit import Interval, build_grid_set, sandwich_ratio, weierstrass_surrogate
from plurikit.polyalg import Poly, lower_order_basis

eps, d = 0.01, 10
rng = np.random.default_rng(0)
for name, fn in (("exp(x)", lambda p: np.exp(p[:, 0].real)),
                 ("exp(-x^2/2)", lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2)),
                 ("cosh(2x)", lambda p: np.cosh(2 * p[:, 0].real))):
    E = build_grid_set(Interval(-1, 1), 401, fn)
    s = weierstrass_surrogate(E, eps)
    ratios = []
    for _ in range(20):
        q = Poly(1, {**{b: rng.standard_normal() for b in lower_order_basis((d,))}, (d,): 1.0})
        ratios.append(sandwich_ratio(E, s, q, d).ratio)
    lo, hi = s.band
    print(f"{name:<12} fit degree {s.fit_degree}, K = {s.terms}, band [{lo:.5f}, {hi:.5f}], "
          f"ratios for d = {d} in [{min(ratios):.4f}, {max(ratios):.4f}] within [{lo**d:.4f}, {hi**d:.4f}]")
