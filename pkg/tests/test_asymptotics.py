import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from plurikit.asymptotics import (
    GridSpec,
    estimate_contact_set,
    hermite_log_leading,
    log_tail_bound,
    parse_freud,
    run_example41,
    run_theorem41,
    scale_problem,
    truncation_radius,
)
from plurikit.errors import ConfigurationError, InputError
from plurikit.geometry import (
    DiscreteMeasure,
    Interval,
    WeightedSampleSet,
    build_grid_set,
    gauss_legendre_grid,
    roots_of_unity,
    uniform_measure,
)
from plurikit.minimax import solve_minimax
from plurikit.orthopoly import orthonormalize
from plurikit.polyalg import direction_sequence


@pytest.fixture(scope="module")
def hermite():
    fp = parse_freud("x^2")
    return fp, run_example41(fp, [1.0], [2, 4, 8, 12, 16, 20, 32])


def hermite_lhs(d):
    return math.exp(hermite_log_leading(d) / d) * math.sqrt(d)


def test_scale_problem_examples():
    s, w = scale_problem(parse_freud("x^2"), 4)
    assert s == 2.0
    assert w(np.array([[1.0]])) == pytest.approx(math.exp(-0.5))
    lin = parse_freud("x1^2 + x2^2", dim=2)
    assert lin.gamma == 2
    for d in (1, 3, 7):
        assert scale_problem(parse_freud("x^4"), d)[0] == pytest.approx(d**0.25, rel=1e-15)
    assert scale_problem(parse_freud("x^2"), 1)[0] == 1.0
    with pytest.raises(InputError):
        scale_problem(parse_freud("x^2"), 0)


def test_gamma_one_scale_is_d():
    # a degree-one homogeneous H is never positive in every direction, so gamma = 1 is
    # exercised by swapping the exponent on an accepted problem
    fp = dataclasses.replace(parse_freud("x^2"), gamma=1.0)
    for d in (1, 2, 5, 9):
        assert scale_problem(fp, d)[0] == d


def test_parse_freud():
    fp = parse_freud("x1^4 + 2*x2^4", dim=2)
    assert fp.gamma == 4 and fp.dim == 2
    assert parse_freud("x1^2 + x2^2").A == pytest.approx(0.5, rel=1e-15)
    assert parse_freud("3*x^2").A == 1.5


@pytest.mark.parametrize("text", ["abs(x)", "x^2 + 1", "x^3", "-x^2", "x1^2 - x2^2", "x^2 + y^2", "exp(x)", "x^"])
def test_parse_freud_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_freud(text)


def test_tail_bound_quadrature_oracle():
    # |S^0| int_R^inf (2r)^{2d} exp(-d r^2) dr for H = x^2 (A = 1/2), by direct quadrature
    fp = parse_freud("x^2")
    for d, R in [(1, 1.0), (4, 2.0), (8, 2.8), (8, 4.0)]:
        val, _ = integrate.quad(lambda r: 2 * (2 * r) ** (2 * d) * math.exp(-d * r * r), R, np.inf, epsabs=0, epsrel=1e-12)
        assert log_tail_bound(fp, d, R) == pytest.approx(math.log(val), rel=1e-9)


def test_tail_bound_erfc_oracle():
    # for d = 1 the shell integral has a closed form in erfc
    fp = parse_freud("x^2")
    R = 1.7
    exact = 8 * (R * math.exp(-R * R) / 2 + math.sqrt(math.pi) / 4 * math.erfc(R))
    assert math.exp(log_tail_bound(fp, 1, R)) == pytest.approx(exact, rel=1e-12)


def test_truncation_radius_examples():
    fp = parse_freud("x^2")
    R = truncation_radius(fp, 8, 1e-10)
    assert 2.0 <= R <= 4.0
    assert truncation_radius(fp, 8, 0.5) < R
    assert log_tail_bound(fp, 8, R) <= math.log(1e-10)
    with pytest.raises(InputError):
        truncation_radius(fp, 8, 1.5)
    with pytest.raises(ConfigurationError, match="R <= 100"):
        truncation_radius(parse_freud("1e-8*x^2"), 8, 1e-10, l2_estimate=1.0)


def test_hermite_finite_j(hermite):
    fp, rep = hermite
    for d, lhs in zip(rep.degrees, rep.lhs):
        if d <= 20:
            assert lhs == pytest.approx(hermite_lhs(d), rel=1e-6)
    assert not rep.stopped


def test_hermite_limit(hermite):
    _, rep = hermite
    target = math.sqrt(2 * math.e)
    assert rep.degrees[-1] == 32
    assert abs(rep.lhs[-1] - target) <= 0.05 * target
    assert abs(rep.rhs_trace[-1] - rep.lhs[-1]) <= 0.08 * rep.lhs[-1]
    assert np.all(np.isfinite(rep.gap)) and np.all(rep.lhs > 0) and np.all(rep.rhs_trace > 0)


def test_hermite_nodes_and_radii(hermite):
    _, rep = hermite
    assert np.all(rep.nodes >= 128)
    assert np.all((rep.radius > 1.5) & (rep.radius < 4.5))


def test_jacobian_radius_invariance():
    fp = parse_freud("x^2")
    a = run_example41(fp, [1.0], [6, 10], GridSpec(radius=3.5))
    b = run_example41(fp, [1.0], [6, 10], GridSpec(radius=5.0))
    np.testing.assert_allclose(a.lhs, b.lhs, rtol=1e-8)


def test_quadrature_doubling():
    fp = parse_freud("x^2")
    a = run_example41(fp, [1.0], [5, 9])
    b = run_example41(fp, [1.0], [5, 9], GridSpec(nodes=2 * int(a.nodes.max())))
    np.testing.assert_allclose(np.exp(a.log_a), np.exp(b.log_a), rtol=1e-8)


def test_two_dim_freud_runs():
    fp = parse_freud("x1^2 + x2^2", dim=2)
    rep = run_example41(fp, [0.5, 0.5], [1, 2], GridSpec(resolution=41, nodes=24))
    assert not rep.stopped and np.all(np.isfinite(rep.lhs)) and np.all(rep.lhs > 0)


def test_legendre_traces():
    E, mu = gauss_legendre_grid([-1.0], [1.0], 200)
    rep = run_theorem41(E, mu, [1.0], [8, 16, 32])
    assert abs(rep.lhs[-1] - 2.0) <= 0.06
    assert abs(rep.gap[-1]) <= 0.06
    # Legendre closed form a_n = sqrt((2n+1)/2) (2n)! / (2^n n!^2); the measure here has total mass 2
    for d, lhs in zip(rep.degrees, rep.lhs):
        log_a = 0.5 * math.log((2 * d + 1) / 2) + math.lgamma(2 * d + 1) - d * math.log(2) - 2 * math.lgamma(d + 1)
        assert lhs == pytest.approx(math.exp(log_a / d), rel=1e-9)


def test_circle_traces():
    m = 80
    E = WeightedSampleSet(roots_of_unity(m)[:, None], np.ones(m))
    mu = DiscreteMeasure(E.points, np.full(m, 1.0 / m))
    js = [1, 4, 16, 32]
    rep = run_theorem41(E, mu, [1.0], js)
    np.testing.assert_allclose(rep.lhs, 1.0, rtol=1e-12)
    # complex minimax is solved on a polygon, so rhs is exact only up to the certificate
    for d, rhs in zip(js, rep.rhs_trace):
        t = solve_minimax(E, (d,))
        assert t.lower_bound * (1 - 1e-12) <= 1.0 <= t.minimax_value * (1 + 1e-12)
        assert 1.0 <= 1 / rhs <= t.certificate_factor ** (1 / d) * (1 + 1e-12)


def test_trace_sandwich():
    E = build_grid_set(Interval(-1, 1), 301, lambda p: np.exp(-np.abs(p[:, 0]) ** 2))
    mu = uniform_measure(E)
    rep = run_theorem41(E, mu, [1.0], [2, 5, 9])
    for d, lhs, rhs in zip(rep.degrees, rep.lhs, rep.rhs_trace):
        o = orthonormalize(E, mu, d)
        v = np.abs(o.weighted_values(direction_sequence([1.0], d), monic=True))
        factor = v.max() / math.sqrt(np.sum(mu.masses * v**2))
        # probability measure: L2 min <= minimax <= sup of the L2 minimizer
        assert rhs <= lhs * (1 + 1e-12)
        assert lhs <= rhs * factor ** (1 / d) * (1 + 1e-12)


def test_trace_errors():
    E = build_grid_set(Interval(-1, 1), 11)
    with pytest.raises(InputError):
        run_theorem41(E, uniform_measure(E), [1.0, 0.0], [2])
    with pytest.raises(InputError):
        run_theorem41(E, uniform_measure(E), [1.0], [3, 2])


def test_contact_set_hermite():
    E = build_grid_set(Interval(-4, 4), 401, lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2))
    cs = estimate_contact_set(E)
    x = cs.points[:, 0].real
    bound = math.sqrt(2) * 1.1
    assert len(x) > 0 and np.all(np.abs(x) <= bound)
    assert cs.points.shape[0] == int(cs.mask.sum())
    tight = estimate_contact_set(E, tol=0.0)
    assert np.all(~tight.mask | cs.mask)


def test_contact_set_constant_weight():
    E = build_grid_set(Interval(-1, 1), 101)
    cs = estimate_contact_set(E)
    assert cs.mask.all()
    with pytest.raises(InputError):
        estimate_contact_set(E, tol=-1.0)


@given(st.floats(0.0, 0.1), st.floats(0.0, 0.1))
def test_contact_threshold_monotone(t1, t2):
    E = build_grid_set(Interval(-3, 3), 61, lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2))
    lo, hi = sorted((t1, t2))
    a = estimate_contact_set(E, d_max=8, tol=lo)
    b = estimate_contact_set(E, d_max=8, tol=hi)
    assert np.all(~a.mask | b.mask)
