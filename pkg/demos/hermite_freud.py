"""Freud weight exp(-x^2): scaled leading coefficients and the contact set.

The orthonormal polynomials for exp(-x^2) are normalized Hermite
polynomials, so every finite degree has a closed-form check.  The scaled
d-th roots a_d^(1/d) * sqrt(d) increase towards sqrt(2e).  The minimax
trace on the truncated ball stays above them and rises to the same limit.
"""

import math

import numpy as np

from plurikit import Interval, build_grid_set, estimate_contact_set, hermite_log_leading, parse_freud, run_example41

fp = parse_freud("x^2")
rep = run_example41(fp, [1.0], [2, 4, 8, 16, 32])
print(f"limit sqrt(2e) = {math.sqrt(2 * math.e):.6f}")
print("d    lhs        closed form  rhs        R    nodes")
for d, lhs, rhs, R, n in zip(rep.degrees, rep.lhs, rep.rhs_trace, rep.radius, rep.nodes):
    exact = math.exp(hermite_log_leading(d) / d) * math.sqrt(d)
    print(f"{d:<4} {lhs:.6f}   {exact:.6f}     {rhs:.6f}   {R:<4} {n}")

# where the weighted extremal polynomials live: the Q = x^2/2 field on [-4, 4]
E = build_grid_set(Interval(-4, 4), 401, lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2))
cs = estimate_contact_set(E)
x = cs.points[:, 0].real
print(f"\ncontact set spans [{x.min():.3f}, {x.max():.3f}]; the equilibrium support is [-sqrt 2, sqrt 2]"
      f" = [{-math.sqrt(2):.3f}, {math.sqrt(2):.3f}]")
