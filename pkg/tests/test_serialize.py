import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plurikit.errors import InputError
from plurikit.geometry import DiscreteMeasure, WeightedSampleSet
from plurikit.polyalg import Basis, MultiIndex, Poly
from plurikit.serialize import (
    fmt,
    measure_from_csv,
    measure_to_csv,
    poly_from_json,
    poly_to_json,
    sample_set_from_csv,
    sample_set_to_csv,
    table_to_csv,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3" and fmt(np.int64(3)) == "3"
    assert fmt(True) == "true"
    assert fmt(MultiIndex((2, 0))) == "2 0"


def test_table_line_endings():
    text = table_to_csv(["a", "b"], [(1, 0.5), (2, 1e-300)])
    assert text == "a,b\n1,0.5\n2,1e-300\n"


@given(st.lists(st.tuples(finite, finite, st.floats(0, 1e6)), min_size=1, max_size=8, unique_by=lambda r: r[0]), st.booleans())
def test_sample_set_round_trip(rows, real):
    pts = np.array([[complex(a, 0.0 if real else b)] for a, b, _ in rows])
    w = np.array([c for _, _, c in rows])
    w[0] = max(w[0], 0.5)  # at least one active point
    E = WeightedSampleSet(pts, w)
    F = sample_set_from_csv(sample_set_to_csv(E))
    assert np.array_equal(F.points, E.points) and np.array_equal(F.weights, E.weights)
    assert F.real_only == bool(np.all(pts.imag == 0))


def test_measure_round_trip():
    mu = DiscreteMeasure(np.array([[0.5 + 1j, -2.0], [1e-20, 3.0 - 0.25j]]), [0.25, 0.75])
    text = measure_to_csv(mu)
    assert text.splitlines()[0] == "re(x1),im(x1),re(x2),im(x2),mass"
    nu = measure_from_csv(text)
    assert np.array_equal(nu.points, mu.points) and np.array_equal(nu.masses, mu.masses)


@pytest.mark.parametrize("text", ["", "x,y,weight\n1,2,3\n", "re(x1),im(x1),mass\n1,0,1\n", "re(x1),im(x1),weight\n1,a,1\n"])
def test_bad_csv(text):
    with pytest.raises(InputError):
        sample_set_from_csv(text)


def test_poly_json_round_trip():
    p = Poly(2, {(0, 0): 1.5, (1, 2): 0.1 - 2j}, Basis("chebyshev", (0.5, 0.0), (2.0, 1.0)))
    q = poly_from_json(poly_to_json(p))
    assert q.dim == 2 and q.terms == p.terms and q.basis == p.basis
    r = poly_from_json('{"dim": 1, "terms": [{"alpha": [3], "re": 1.0}], "basis": null}')
    assert r.terms == {(3,): 1} and r.basis.is_plain
    with pytest.raises(InputError):
        poly_from_json({"terms": []})
