"""Tolerances and guard values used across the package.

Collected in one place so run manifests can echo every one of them.
"""

# orthopoly: abort when min|R_kk| / max|R_kk| falls below this
CONDITIONING_GUARD = 1e-13
# geometry.extract_weight: relative tolerance for grouping lambda = z/t
GROUPING_RTOL = 1e-9
# minimax: number of half-planes polygonizing |v| <= u on the complex path
POLYGON_SIDES = 32
# minimax: rank cutoff for the lower-order block
RANK_RTOL = 1e-13
# simplex: pivot/feasibility tolerances
SIMPLEX_TOL = 1e-12
SIMPLEX_MAX_ITER = 50_000
# simplex: consecutive degenerate pivots before Bland's rule takes over
SIMPLEX_STALL_LIMIT = 50
# rows whose weighted scale is below this fraction of the largest are numerically zero
SIGNIFICANT_ROW_FLOOR = 1e-16
# direction.sum(theta) == 1 within this
DIRECTION_ATOL = 1e-12
# extremal
DEFAULT_DMAX = 24
ROBIN_S_LIST = (1e3, 1e4, 1e5)
CONTACT_TOL = 0.02
# orthopoly quadrature: doubling changes leading coefficients by less than this
QUADRATURE_RTOL = 1e-8
# bernstein.weierstrass_surrogate
SURROGATE_MAX_DEGREE = 50
# asymptotics
TRUNCATION_R_MAX = 100.0
TRUNCATION_STEP = 0.1
# asymptotics.parse_freud: sampled homogeneity check and sphere sampling for A
HOMOGENEITY_RTOL = 1e-9
SPHERE_SAMPLES = 4096


def as_dict():
    return {k.lower(): v for k, v in globals().items() if k.isupper()}
