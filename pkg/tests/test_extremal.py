import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plurikit.errors import InputError, PreconditionError
from plurikit.extremal import (
    green_homogeneous,
    green_unweighted,
    green_weighted,
    robin_estimate,
    weight_monotonicity_check,
)
from plurikit.geometry import Circle, Interval, WeightedSampleSet, build_grid_set, lift_circular, uniform_measure
from plurikit.polyalg import eval_homogeneous, eval_poly


@pytest.fixture(scope="module")
def circle():
    E = build_grid_set(Circle(), 64)
    return E, uniform_measure(E), green_weighted(E, uniform_measure(E), 8)


@pytest.fixture(scope="module")
def gauss_interval():
    E = build_grid_set(Interval(-1, 1), 81, lambda p: np.exp(-np.abs(p[:, 0]) ** 2 / 2))
    mu = uniform_measure(E)
    return E, mu, green_weighted(E, mu, 10)


def test_circle_value_at_two(circle):
    _, _, g = circle
    v = float(g([[2.0]])[0])
    assert math.log(2) - 0.01 <= v <= math.log(2) + 1e-12


def test_admissibility(gauss_interval):
    E, _, g = gauss_interval
    assert np.all(g(E.points) <= E.Q + 1e-12)


def test_family_normalizers_positive(gauss_interval):
    _, _, g = gauss_interval
    fam = g.family
    assert len(fam) == sum(d + 1 for d in range(1, 11))
    assert all(norm > 0 for _, _, norm in fam)
    # the stored normalizer is the weighted sup norm on E
    E = gauss_interval[0]
    p, d, norm = fam[7]
    assert np.max(E.weights**d * np.abs(eval_poly(p, E.points.real))) == pytest.approx(norm, rel=1e-9)


def test_constant_weight_shift():
    E = build_grid_set(Interval(-1, 1), 61)
    mu = uniform_measure(E)
    g1 = green_weighted(E, mu, 6)
    g3 = green_weighted(E.with_weights(np.full(len(E), 3.0)), mu, 6)
    z = np.array([[0.3], [1.5], [2 + 1j]])
    np.testing.assert_allclose(g3(z), g1(z) - math.log(3.0), rtol=0, atol=1e-12)


def test_unweighted_ignores_weight(gauss_interval):
    E, mu, _ = gauss_interval
    a = green_unweighted(E, mu, 5)
    b = green_weighted(E.with_weights(np.ones(len(E))), mu, 5)
    z = np.array([[2.0], [0.5j]])
    np.testing.assert_array_equal(a(z), b(z))


def test_family_monotonicity(gauss_interval):
    E, mu, g10 = gauss_interval
    g6 = green_weighted(E, mu, 6)
    z = np.array([[x + 0.3j] for x in np.linspace(-3, 3, 25)])
    assert np.all(g10(z) >= g6(z))
    assert np.all(g10.convergence_gap(z) >= 0)


@pytest.fixture(scope="module")
def lifted(gauss_interval):
    E, mu, g = gauss_interval
    Z = lift_circular(E, 21)
    return Z, green_homogeneous(Z, base=g), g


def test_lift_sup_normalizers(lifted):
    _, H, g = lifted
    for bh, bg in zip(H.blocks, g.blocks):
        np.testing.assert_allclose(np.exp(bh.log_norm), np.exp(bg.log_norm), rtol=1e-12)


def test_homogeneous_family_members_are_homogenizations(lifted):
    Z, H, g = lifted
    for (P, d, norm), (G, dg, normg) in list(zip(H.family, g.family))[::9]:
        assert d == dg
        x = Z.samples[:5]
        lhs = eval_homogeneous(P, x)
        rhs = x[:, 0] ** d * eval_poly(G.to_monomial(), x[:, 1:] / x[:, :1])
        np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


def test_homogeneous_green_identity(lifted, rng):
    _, H, g = lifted
    t = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    z = rng.standard_normal(100) * 2 + 1j * rng.standard_normal(100)
    lhs = H(np.column_stack([t, z]))
    rhs = g((z / t)[:, None]) + np.log(np.abs(t))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_homogeneity(lifted, rng):
    _, H, _ = lifted
    x = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    s = complex(rng.standard_normal(), rng.standard_normal())
    np.testing.assert_allclose(H(s * x), H(x) + math.log(abs(s)), rtol=0, atol=1e-12)


def test_extended_vanishes_on_z(lifted):
    Z, H, _ = lifted
    h = H(Z.samples)
    ext = H.extended(Z.samples)
    assert np.all(ext[h <= 0] == 0)
    assert np.all(ext >= 0)


def test_robin_unit_circle(circle):
    _, _, g = circle
    z = np.array([[np.exp(0.7j)]])
    r1 = robin_estimate(g, z)
    assert abs(r1.value) <= 1e-6
    r2 = robin_estimate(g, 2 * z)
    assert abs(r2.value - r1.value - math.log(2)) <= 1e-6
    assert r1.trace.shape == (3, 1)


def test_robin_matches_homogeneous(lifted, rng):
    _, H, _ = lifted
    x = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    r = robin_estimate(H, x)
    np.testing.assert_allclose(r.value, H(x), atol=1e-6)


def test_robin_input_checks(circle):
    _, _, g = circle
    with pytest.raises(InputError):
        robin_estimate(g, [[1.0]], (10.0, 100.0))
    with pytest.raises(InputError):
        robin_estimate(g, [[1.0]], (1e4, 1e3))


def test_monotonicity_constants(gauss_interval):
    E, mu, _ = gauss_interval
    probes = np.array([[0.2], [1.7], [3j]])
    rep = weight_monotonicity_check(E, mu, 2.0, 1.0, 6, probes)
    assert rep.ok
    np.testing.assert_allclose(rep.v_lo - rep.v_hi, math.log(2), atol=1e-12)
    rep = weight_monotonicity_check(E, mu, E.weights, E.weights, 6, probes)
    assert np.array_equal(rep.v_hi, rep.v_lo)
    with pytest.raises(PreconditionError):
        weight_monotonicity_check(E, mu, 1.0, 2.0, 4, probes)


def test_monotone_sequence(gauss_interval):
    E, mu, _ = gauss_interval
    probes = np.array([[x] for x in np.linspace(-2, 2, 9)] + [[1j]])
    w = E.weights
    # V for w + 1/j should increase with j; compare consecutive pairs
    for j in (1, 2, 4):
        rep = weight_monotonicity_check(E, mu, w + 1 / j, w + 1 / (2 * j), 6, probes)
        assert rep.max_violation == 0.0


@given(st.integers(0, 2**31))
def test_monotonicity_random(seed):
    rng = np.random.default_rng(seed)
    x = np.sort(rng.uniform(-1, 1, 30))
    lo = rng.uniform(0.2, 1.0, 30)
    hi = lo * (1 + rng.uniform(0, 1, 30) * (rng.random(30) < 0.5))
    E = WeightedSampleSet(x[:, None], lo)
    probes = rng.standard_normal((8, 1)) * 2 + 1j * rng.standard_normal((8, 1))
    rep = weight_monotonicity_check(E, uniform_measure(E), hi, lo, 5, probes)
    assert rep.ok and np.all(rep.v_hi <= rep.v_lo)
