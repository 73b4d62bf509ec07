"""Directional Tchebyshev constants against L2 leading coefficients on [-1, 1].

With w = 1 the minimax problem is solved by Chebyshev polynomials
(T_n = 2^(1-n)) and the L2 problem by Legendre polynomials; both d-th roots
tend to 1/2, so lhs and rhs below both approach 2.  A Gaussian weight
changes the limit but the two traces still close in on each other.
"""

import numpy as np

from plurikit import Interval, build_grid_set, run_theorem41, solve_minimax, uniform_measure

E = build_grid_set(Interval(-1, 1), 2001)
print("n   minimax T_n         2^(1-n)")
for n in (2, 4, 8, 16):
    print(f"{n:<3} {solve_minimax(E, (n,)).minimax_value:.12e}  {2.0 ** (1 - n):.12e}")

for label, weight in (("w = 1", None), ("w = exp(-x^2)", lambda p: np.exp(-np.abs(p[:, 0]) ** 2))):
    F = build_grid_set(Interval(-1, 1), 2001, weight)
    rep = run_theorem41(F, uniform_measure(F), [1.0], [4, 8, 16, 32])
    print(f"\n{label}")
    print("d    lhs = a^(1/d)   rhs = 1/T^(1/d)   gap")
    for d, lhs, rhs, gap in zip(rep.degrees, rep.lhs, rep.rhs_trace, rep.gap):
        print(f"{d:<4} {lhs:.6f}        {rhs:.6f}          {gap:.4f}")
